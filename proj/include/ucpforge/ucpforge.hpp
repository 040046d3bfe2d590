#pragma once

#include "log_complex.hpp"
#include "smoothkit.hpp"
#include "field_jet.hpp"
#include "layercore.hpp"
#include "assembly.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "fit.hpp"
#include "sphere.hpp"
#include "carleman.hpp"
#include "verify.hpp"
