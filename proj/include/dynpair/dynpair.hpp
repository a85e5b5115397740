#pragma once

// Umbrella header for the dynpair library: strongly regular pairs of affine
// automorphisms, Nullstellensatz certificates, local Green functions,
// canonical heights, and periodic-point equidistribution reports.

#include <dynpair/rational.hpp>
#include <dynpair/polynomial.hpp>
#include <dynpair/poly_map.hpp>
#include <dynpair/homogenize.hpp>
#include <dynpair/io.hpp>
#include <dynpair/fp.hpp>
#include <dynpair/linalg.hpp>
#include <dynpair/place.hpp>
#include <dynpair/certificate.hpp>
#include <dynpair/regularity.hpp>
#include <dynpair/interval.hpp>
#include <dynpair/padic.hpp>
#include <dynpair/green.hpp>
#include <dynpair/heights.hpp>
#include <dynpair/univariate.hpp>
#include <dynpair/periodic.hpp>
#include <dynpair/equidist.hpp>
