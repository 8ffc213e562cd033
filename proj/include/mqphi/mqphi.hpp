#pragma once

#include "distributions.hpp"
#include "eval_config.hpp"
#include "humbert_series.hpp"
#include "marcum.hpp"
#include "phi3.hpp"
#include "quadrature.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "signed_log.hpp"
#include "special_functions.hpp"
#include "verify.hpp"
