#ifndef ATTRACTOR_ATTRACTOR_HPP
#define ATTRACTOR_ATTRACTOR_HPP

#include "attractor/borel.hpp"
#include "attractor/ce.hpp"
#include "attractor/dispersion.hpp"
#include "attractor/error.hpp"
#include "attractor/quadrature.hpp"
#include "attractor/rational.hpp"
#include "attractor/series.hpp"
#include "attractor/special.hpp"
#include "attractor/spectral.hpp"
#include "attractor/weight.hpp"

#endif  // ATTRACTOR_ATTRACTOR_HPP
