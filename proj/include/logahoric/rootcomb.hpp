#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace logahoric::rootcomb {

using IMat = Eigen::MatrixXi;
using IVec = Eigen::VectorXi;

// Convention: cartan(i, j) = <alpha_i^vee, alpha_j>, Bourbaki node numbering
// (stored 0-based; node 0 of the affine matrix is the affine node).
struct RootDatum {
  char type_letter = 'A';
  int rank = 1;
  IMat cartan;
  IMat affine_cartan;
};

RootDatum make_root_datum(char type_letter, int rank);
bool valid_rank(char type_letter, int rank);

IMat canonical_cartan(char type_letter, int rank);

// Exact test: symmetrizable with positive definite symmetrization.
bool is_valid_cartan(const IMat& a);

// Positive roots in simple-root coordinates; highest root has maximal height.
std::vector<IVec> positive_roots(const IMat& cartan);
IVec highest_root(const IMat& cartan);
IMat affine_extension(const IMat& cartan);

long long parabolic_class_count(const RootDatum& d);
long long parahoric_class_count(const RootDatum& d);

struct CartanComponent {
  char type_letter;
  int rank;
  std::vector<int> nodes;  // indices into the ambient node set
};

struct LeviType {
  std::vector<CartanComponent> components;
  int torus_rank = 0;
  std::string str() const;  // e.g. "A2+A1+T1"
};

// Identify an indecomposable Cartan matrix up to simultaneous permutation.
// Throws precondition_error if it is not of finite type.
CartanComponent classify_indecomposable(const IMat& block);

// Decompose any finite-type Cartan matrix into irreducible blocks.
std::vector<CartanComponent> classify_cartan(const IMat& a);

// nodes are affine indices in {0..rank}; the subset must be proper.
LeviType levi_type_of_affine_subset(const RootDatum& d, const std::vector<int>& nodes);

// All proper subsets of affine nodes as bitmasks, in increasing order.
std::vector<unsigned> proper_affine_subsets(const RootDatum& d);
std::vector<int> nodes_of_mask(unsigned mask, int count);

}  // namespace logahoric::rootcomb
