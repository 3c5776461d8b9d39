#pragma once

#include "prewavelet/assembly.hpp"
#include "prewavelet/bench.hpp"
#include "prewavelet/dense.hpp"
#include "prewavelet/grid.hpp"
#include "prewavelet/homogenize.hpp"
#include "prewavelet/linalg.hpp"
#include "prewavelet/prewavelet_basis.hpp"
#include "prewavelet/problems.hpp"
#include "prewavelet/quadrature.hpp"
#include "prewavelet/solver.hpp"
#include "prewavelet/sparse_matrix.hpp"
