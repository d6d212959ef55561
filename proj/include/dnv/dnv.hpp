#pragma once

#include "dnv/adversary.hpp"
#include "dnv/binomial.hpp"
#include "dnv/bounds.hpp"
#include "dnv/clustered.hpp"
#include "dnv/dist.hpp"
#include "dnv/errors.hpp"
#include "dnv/newsvendor.hpp"
#include "dnv/numeric.hpp"
#include "dnv/quadrature.hpp"
#include "dnv/rng.hpp"
