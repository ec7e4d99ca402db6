#pragma once

#include <string>
#include <vector>

#include "graphhardy/atomic.hpp"
#include "graphhardy/markov.hpp"
#include "graphhardy/rng.hpp"
#include "graphhardy/tent.hpp"
#include "graphhardy/types.hpp"
#include "graphhardy/varexp.hpp"

namespace graphhardy {

// ---- certificates -------------------------------------------------------------

/// (r, p(.), M)-atom a = L^M b on `ball`.
struct HardyAtomCertificate {
  VertexFunction a;
  VertexFunction b;
  Ball ball;
  double r = 2.0;
  int M = 1;
  std::vector<double> norms;  // ||L^k b||_r, k = 0..M
};

struct CertificateCheck {
  bool ok = false;
  double worst_ratio = 0.0;  // max_k ||L^k b||_r / bound_k
  int worst_k = -1;
  std::string failure;
};

/// r_B^{M-k} mu(B)^{1/r} / ||chi_B||_p
double atom_size_bound(const WeightedGraph& g, const ExponentFunction& p, const Ball& b, double r, int M, int k);

/// Fills a = L^M b and the norms.
HardyAtomCertificate make_hardy_certificate(const MarkovOperator& op, VertexFunction b, const Ball& ball, double r,
                                            int M);

/// Recomputes every L^k b and checks a = L^M b, the supports and the size bounds scaled by C.
CertificateCheck verify_hardy_atom(const MarkovOperator& op, const ExponentFunction& p,
                                   const HardyAtomCertificate& cert, double C = 1.0);

/// Random atom: b drawn on B(x_B, r_B - M) and scaled to a fraction in [1/2, 1] of the tightest bound.
/// Needs r_B > M.
HardyAtomCertificate random_hardy_atom(const MarkovOperator& op, const ExponentFunction& p, const Ball& ball, double r,
                                       int M, Rng& rng);

/// (q, p(.), M, eps)-molecule m = L^M b around `ball`.
struct MoleculeCertificate {
  VertexFunction m;
  VertexFunction b;
  Ball ball;
  double q = 2.0;
  int M = 1;
  double eps = 1.0;
};

struct MoleculeCheck {
  bool ok = false;
  double worst_ratio = 0.0;  // max over (k, j) of annulus norm / bound
  int worst_k = -1;
  int worst_j = -1;
  std::vector<std::vector<double>> ratio;  // [k][j]
  /// max_k ||L^k b||_q / (r_B^{M-k} mu(B)^{1/q} / ||chi_B||_p)
  double summed_C = 0.0;
  std::string failure;
};

/// Checks every annulus inequality on S_j = B(x_B, 2^{j+1} r_B) \ B(x_B, 2^{j-1} r_B), S_0 = B,
/// with bounds scaled by C.
MoleculeCheck verify_molecule(const MarkovOperator& op, const ExponentFunction& p, const MoleculeCertificate& cert,
                              double C = 1.0);

/// Pi_M of a tent atom with its witness, as a molecule around the atom's ball.
MoleculeCertificate molecule_from_tent_atom(const MarkovOperator& op, const TentAtom& atom, double q, int M,
                                            double eps);

/// (2, p(.))-atom: supported in B, mean zero, ||a||_2 <= mu(B)^{1/2} / ||chi_B||_p.
struct SimpleAtomCertificate {
  VertexFunction a;
  Ball ball;
};

CertificateCheck verify_simple_atom(const WeightedGraph& g, const ExponentFunction& p, const SimpleAtomCertificate& c);
SimpleAtomCertificate random_simple_atom(const WeightedGraph& g, const ExponentFunction& p, const Ball& ball,
                                         Rng& rng);

// ---- Hardy-space atomic decomposition ----------------------------------------

struct HardyAtomTerm {
  double lambda = 0.0;
  HardyAtomCertificate cert;
};

struct HardyDecomposition {
  std::vector<HardyAtomTerm> atoms;
  int tent_atoms = 0;
  double rescale = 1.0;            // global C applied to every certificate
  double residual = 0.0;           // ||f - sum lambda a||_2
  double relative_residual = 0.0;  // residual / ||f||_2
  double aggregate = 0.0;          // A({lambda}, {dilated balls})
  double hardy_norm = 0.0;         // ||S_L f||_p at the same level cap
  bool certificates_ok = true;
  int first_bad_certificate = -1;
};

/// f -> F(y,k) = k L P^{floor(k/2)} f -> tent atoms -> Pi_M with witnesses on B(x_B, (M+2) r_B).
/// Requires r >= 2, r > p_+, M > 2D/p_- and mean-zero f. K = 0 selects default_level_cap.
HardyDecomposition hardy_atomic_decomposition(const MarkovOperator& op, const ExponentFunction& p,
                                              const VertexFunction& f, double r, int M, double D, int K = 0);

// ---- synthesis and comparison verifiers ---------------------------------------

/// ||S_L(sum lambda_j a_j)||_p / A({lambda_j}, {B_j}); 0 for an empty or all-zero family.
double synthesis_ratio(const MarkovOperator& op, const ExponentFunction& p, const std::vector<WeightedBall>& terms,
                       const std::vector<VertexFunction>& pieces, int K);

RatioFit verify_atom_synthesis(const MarkovOperator& op, const ExponentFunction& p, double r, int M, double D,
                               int family_size, const Sweep& sweep, int K = 0);

struct MolecularSynthesisReport {
  RatioFit fit;
  double max_rescale = 0.0;  // largest per-family global rescale
  double max_summed_C = 0.0;
  bool all_certified = true;
};

/// Families of Pi_M(tent atom) molecules; each family gets one global rescale.
MolecularSynthesisReport verify_molecular_synthesis(const MarkovOperator& op, const ExponentFunction& p, double q,
                                                    int M, double eps, double D, int family_size, const Sweep& sweep,
                                                    int K = 0);

/// ||M_+ f||_p / ||S_L f||_p over Hardy atoms and localized mean-zero functions.
RatioFit verify_mplus_bound(const MarkovOperator& op, const ExponentFunction& p, int M, const Sweep& sweep, int K = 0);

struct SimpleAtomHypotheses {
  double poincare_C = 0.0;
  double D = 0.0;
  double h = 0.0;
};

/// ||M_+(sum lambda a)||_p / A over families of (2, p(.))-atoms.
RatioFit verify_simple_atom_bound(const MarkovOperator& op, const ExponentFunction& p, const SimpleAtomHypotheses& hyp,
                                  int family_size, const Sweep& sweep, int K = 0);

struct EqualReport {
  RatioFit forward;   // ||S_L f||_p / ||f||_p
  RatioFit backward;  // ||f||_p / ||S_L f||_p
};

EqualReport verify_equal_lebesgue(const MarkovOperator& op, const ExponentFunction& p, const Sweep& sweep, int K = 0);

/// |mean| <= 1e-9 sum |f| mu
bool is_mean_zero(const WeightedGraph& g, const VertexFunction& f);

}  // namespace graphhardy
