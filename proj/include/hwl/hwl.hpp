#pragma once

#include "hwl/error.hpp"
#include "hwl/numerics.hpp"
#include "hwl/wavelets.hpp"
#include "hwl/hilbert.hpp"
#include "hwl/analysis.hpp"
#include "hwl/report_io.hpp"
#include "hwl/figures.hpp"
#include "hwl/version.hpp"
