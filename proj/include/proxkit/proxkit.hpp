#pragma once

// Closed-form sparse and low-rank approximation built on the soft-threshold
// map: scalar and entry-wise proximal operators, a one-sided Jacobi SVD,
// singular value thresholding, exact l1/nuclear ball projections, and
// brute-force oracles that audit each solution.

#include "proxkit/dense_matrix.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/io.hpp"
#include "proxkit/matrix_prox.hpp"
#include "proxkit/oracle.hpp"
#include "proxkit/rng.hpp"
#include "proxkit/scalar_prox.hpp"
#include "proxkit/svd.hpp"
#include "proxkit/vector_prox.hpp"
