#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ellspin/chain.hpp"

namespace ellspin {

// Distance from z to the nearest point of {N k + i pi l / kappa}.
double lattice_distance(cplx z, const EllipticParams& p);

struct DrawOptions {
  double kappa_lo = 0.4, kappa_hi = 1.2;
  bool trig = false;          // kappa = 0
  bool reality = false;       // eta in iR, a in R
  double margin = 0.05;       // min lattice distance of every realised eta (a - s) and x + eta
};

// A random valid ChainParams whose dynamical shifts and integer-argument
// R-matrices stay away from poles.
ChainParams random_chain_params(std::mt19937_64& g, int N, const DrawOptions& opt = {});

// Generic coordinates: pairwise differences (and their shifts by multiples
// of c within `reach`) keep a margin from the theta zero lattice.
std::vector<cplx> random_generic_point(std::mt19937_64& g, int N, const EllipticParams& p, cplx c,
                                       int reach = 2, double margin = 0.05);

}  // namespace ellspin
