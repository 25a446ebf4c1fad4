#pragma once

#include "common.hpp"
#include "permutation.hpp"
#include "symmetrization.hpp"
#include "multipoly.hpp"
#include "identities.hpp"
#include "jet.hpp"
#include "kernels.hpp"
#include "quadrature.hpp"
#include "estimates.hpp"
#include "experiments.hpp"
#include "report.hpp"
