#pragma once

#include "stats/descriptive.hpp"
#include "stats/eigen.hpp"
#include "stats/hypothesis.hpp"
#include "stats/matrix.hpp"
#include "stats/pca.hpp"
#include "stats/special.hpp"
#include "stats/tukey.hpp"
