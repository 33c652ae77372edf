#pragma once

#include "ktchart/bandwidth.hpp"
#include "ktchart/chart.hpp"
#include "ktchart/csv.hpp"
#include "ktchart/error.hpp"
#include "ktchart/kernel.hpp"
#include "ktchart/monitor.hpp"
#include "ktchart/observation_matrix.hpp"
#include "ktchart/persistence.hpp"
#include "ktchart/render.hpp"
#include "ktchart/sampling.hpp"
#include "ktchart/seed.hpp"
#include "ktchart/simulate.hpp"
#include "ktchart/svdd.hpp"
#include "ktchart/window.hpp"
