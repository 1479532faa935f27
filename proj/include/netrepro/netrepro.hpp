#pragma once

#include "netrepro/equilibrium.hpp"
#include "netrepro/error.hpp"
#include "netrepro/estimation.hpp"
#include "netrepro/integrate.hpp"
#include "netrepro/matrix.hpp"
#include "netrepro/model.hpp"
#include "netrepro/random.hpp"
#include "netrepro/repro.hpp"
#include "netrepro/spectral.hpp"
#include "netrepro/stochastic.hpp"
#include "netrepro/vector_field.hpp"
