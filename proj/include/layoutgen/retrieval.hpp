#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "layoutgen/constraint.hpp"
#include "layoutgen/error.hpp"
#include "layoutgen/geometry.hpp"

namespace layoutgen {

using Embedding = Eigen::VectorXd;

struct Exemplar {
  std::string id;
  ConstraintSpec constraint;
  Layout layout;
  std::optional<Embedding> embedding;
  std::optional<BoundingBox> saliency_box;
};

/// Searchable corpus for one (domain, task). Immutable after construction.
class ExemplarIndex {
 public:
  ExemplarIndex(DomainConfig domain, TaskKind task, std::vector<Exemplar> exemplars);

  const DomainConfig& domain() const { return domain_; }
  TaskKind task() const { return task_; }
  const std::vector<Exemplar>& exemplars() const { return exemplars_; }
  std::size_t size() const { return exemplars_.size(); }
  bool empty() const { return exemplars_.empty(); }
  const Exemplar* find(const std::string& id) const;

 private:
  DomainConfig domain_;
  TaskKind task_;
  std::vector<Exemplar> exemplars_;
};

/// Geometric attribute vector g of one element-wise constraint: empty for
/// type-only tasks, (w, h) for Gen-TS, (l, t, w, h) for completion/refinement.
struct ElementConstraint {
  std::string type_label;
  Eigen::VectorXd attributes;
};

std::vector<ElementConstraint> element_constraints(TaskKind task,
                                                   const ConstraintSpec& c);

/// W(p, q) = [same type] * 2^(-||g_p - g_q||)
Eigen::MatrixXd constraint_weight_matrix(const std::vector<ElementConstraint>& a,
                                         const std::vector<ElementConstraint>& b);

/// Score plus the share of elements covered by positive matched edges,
/// kept / max(U, V). Coverage only orders exemplars whose scores tie.
struct MatchScore {
  double score = 0.0;
  double coverage = 1.0;
};

MatchScore explicit_constraint_match(const ConstraintSpec& x_test, const ConstraintSpec& x_j,
                                     TaskKind task);

/// Mean weight over the positive edges of the canonical maximum matching;
/// 0 when no positive edge is matched. Relations (Gen-R) are not scored.
double explicit_constraint_similarity(const ConstraintSpec& x_test,
                                      const ConstraintSpec& x_j, TaskKind task);

double content_similarity(const BoundingBox& m_test, const BoundingBox& m_j);

/// Cosine similarity. Throws InvalidInput on dimension mismatch or zero norm.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar text_similarity(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::InvalidInput, "embedding dimension mismatch");
  }
  const auto na = a.norm();
  const auto nb = b.norm();
  if (!(na > 0) || !(nb > 0)) {
    throw Error(ErrorKind::InvalidInput, "zero embedding vector");
  }
  return a.dot(b) / (na * nb);
}

/// Everything a query needs beyond its constraint.
struct Query {
  ConstraintSpec constraint;
  std::optional<Embedding> embedding;  // text-to-layout
};

struct ScoredExemplar {
  const Exemplar* exemplar = nullptr;
  double score = 0.0;
  double coverage = 1.0;
};

/// Retrieval order: score descending, then coverage descending, then id.
bool ranks_before(const ScoredExemplar& a, const ScoredExemplar& b);

struct Selection {
  std::vector<ScoredExemplar> items;  // in retrieval order
  std::vector<std::string> warnings;
};

/// Task-appropriate similarity between the query and one exemplar.
MatchScore similarity(const Query& query, const Exemplar& exemplar, TaskKind task);

/// Top-k in retrieval order. Throws InvalidState on an empty index and
/// InvalidInput when k < 1.
Selection select_top_k(const Query& query, const ExemplarIndex& index, int k);

}  // namespace layoutgen
