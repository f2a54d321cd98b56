#ifndef RPND_RPND_HPP
#define RPND_RPND_HPP

#include "rpnd/combinatorics.hpp"
#include "rpnd/data/arff.hpp"
#include "rpnd/data/csv.hpp"
#include "rpnd/data/dataset.hpp"
#include "rpnd/data/folds.hpp"
#include "rpnd/data/sampling.hpp"
#include "rpnd/dichotomy.hpp"
#include "rpnd/ensemble.hpp"
#include "rpnd/error.hpp"
#include "rpnd/eval/cv.hpp"
#include "rpnd/eval/report.hpp"
#include "rpnd/eval/ttest.hpp"
#include "rpnd/experiment.hpp"
#include "rpnd/learners/binary_model.hpp"
#include "rpnd/learners/centroid.hpp"
#include "rpnd/selection.hpp"

#endif  // RPND_RPND_HPP
