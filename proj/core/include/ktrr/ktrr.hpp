#pragma once

#include "ktrr/config.hpp"
#include "ktrr/corruption.hpp"
#include "ktrr/dataio.hpp"
#include "ktrr/error.hpp"
#include "ktrr/experiment.hpp"
#include "ktrr/graph.hpp"
#include "ktrr/kernels.hpp"
#include "ktrr/kmeans.hpp"
#include "ktrr/metrics.hpp"
#include "ktrr/parallel.hpp"
#include "ktrr/pipeline.hpp"
#include "ktrr/report.hpp"
#include "ktrr/rng.hpp"
#include "ktrr/solver.hpp"
#include "ktrr/synthetic.hpp"
#include "ktrr/version.hpp"
