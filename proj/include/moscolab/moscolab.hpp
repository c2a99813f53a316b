#ifndef MOSCOLAB_MOSCOLAB_HPP
#define MOSCOLAB_MOSCOLAB_HPP

#include "moscolab/errors.hpp"
#include "moscolab/space.hpp"
#include "moscolab/convex.hpp"
#include "moscolab/prox.hpp"
#include "moscolab/convergence.hpp"
#include "moscolab/mosco_metric.hpp"
#include "moscolab/sampling.hpp"
#include "moscolab/fixtures.hpp"
#include "moscolab/suites.hpp"
#include "moscolab/scenario.hpp"

#endif
