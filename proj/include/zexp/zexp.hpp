#pragma once

#include "coefficients.hpp"
#include "errors.hpp"
#include "hylleraas.hpp"
#include "linalg.hpp"
#include "operators.hpp"
#include "perturbation.hpp"
#include "precision.hpp"
#include "quadrature.hpp"
#include "reference.hpp"
#include "series.hpp"
