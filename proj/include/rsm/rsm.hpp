#ifndef RSM_RSM_HPP
#define RSM_RSM_HPP

#include "error.hpp"
#include "rng.hpp"
#include "log_domain.hpp"
#include "special_functions.hpp"
#include "core_model.hpp"
#include "partition.hpp"
#include "annealed.hpp"
#include "capacity.hpp"
#include "montecarlo.hpp"
#include "alignment.hpp"
#include "report.hpp"
#include "verify.hpp"

#endif
