#pragma once

#include "fracres/caputo.hpp"
#include "fracres/config.hpp"
#include "fracres/contour.hpp"
#include "fracres/decay.hpp"
#include "fracres/eigen.hpp"
#include "fracres/error.hpp"
#include "fracres/evolution.hpp"
#include "fracres/experiment.hpp"
#include "fracres/gauss_legendre.hpp"
#include "fracres/generators.hpp"
#include "fracres/kernels.hpp"
#include "fracres/output.hpp"
#include "fracres/tridiagonal.hpp"
