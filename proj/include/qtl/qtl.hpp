#pragma once

#include "qtl/dynamics.hpp"
#include "qtl/interactions.hpp"
#include "qtl/parallel.hpp"
#include "qtl/random.hpp"
#include "qtl/spectra.hpp"
#include "qtl/states.hpp"
#include "qtl/theory.hpp"
