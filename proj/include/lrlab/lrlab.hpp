#pragma once

#include "lrlab/algebra.hpp"
#include "lrlab/bounds.hpp"
#include "lrlab/config.hpp"
#include "lrlab/decay.hpp"
#include "lrlab/dynamics.hpp"
#include "lrlab/experiments.hpp"
#include "lrlab/lattice.hpp"
#include "lrlab/model.hpp"
#include "lrlab/random_models.hpp"
#include "lrlab/report.hpp"
#include "lrlab/spectra.hpp"
