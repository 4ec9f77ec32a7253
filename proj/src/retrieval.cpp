#include "layoutgen/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "layoutgen/matching.hpp"

namespace layoutgen {

ExemplarIndex::ExemplarIndex(DomainConfig domain, TaskKind task,
                             std::vector<Exemplar> exemplars)
    : domain_(std::move(domain)), task_(task), exemplars_(std::move(exemplars)) {
  for (const auto& e : exemplars_) require_matches(task_, e.constraint);
}

const Exemplar* ExemplarIndex::find(const std::string& id) const {
  for (const auto& e : exemplars_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

namespace {

ElementConstraint from_box(const Element& e) {
  Eigen::VectorXd g(4);
  g << e.box.left, e.box.top, e.box.width, e.box.height;
  return {e.type_label, std::move(g)};
}

ElementConstraint type_only(const std::string& label) {
  return {label, Eigen::VectorXd()};
}

}  // namespace

std::vector<ElementConstraint> element_constraints(TaskKind task,
                                                   const ConstraintSpec& c) {
  require_matches(task, c);
  std::vector<ElementConstraint> out;
  switch (task) {
    case TaskKind::GenTS:
      for (const auto& item : std::get<TypeSizeConstraint>(c).items) {
        Eigen::VectorXd g(2);
        g << item.width, item.height;
        out.push_back({item.type_label, std::move(g)});
      }
      break;
    case TaskKind::Completion:
      for (const auto& e : std::get<PartialLayout>(c).elements) out.push_back(from_box(e));
      break;
    case TaskKind::Refinement:
      for (const auto& e : std::get<NoisyLayout>(c).elements) out.push_back(from_box(e));
      break;
    default:
      for (const auto& t : constraint_types(c)) out.push_back(type_only(t));
      break;
  }
  return out;
}

Eigen::MatrixXd constraint_weight_matrix(const std::vector<ElementConstraint>& a,
                                         const std::vector<ElementConstraint>& b) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.size()),
                                            static_cast<Eigen::Index>(b.size()));
  for (std::size_t u = 0; u < a.size(); ++u) {
    for (std::size_t v = 0; v < b.size(); ++v) {
      if (a[u].type_label != b[v].type_label) continue;
      const double dist = (a[u].attributes - b[v].attributes).norm();
      w(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) =
          std::exp2(-dist);
    }
  }
  return w;
}

MatchScore explicit_constraint_match(const ConstraintSpec& x_test, const ConstraintSpec& x_j,
                                     TaskKind task) {
  const auto a = element_constraints(task, x_test);
  const auto b = element_constraints(task, x_j);
  const Eigen::MatrixXd w = constraint_weight_matrix(a, b);
  const auto matching = hungarian_max_matching(w);
  double sum = 0.0;
  int kept = 0;
  for (auto [u, v] : matching.pairs) {
    const double weight = w(u, v);
    if (weight > 0.0) {
      sum += weight;
      ++kept;
    }
  }
  if (kept == 0) return {0.0, 0.0};
  const auto widest = static_cast<double>(std::max(a.size(), b.size()));
  return {sum / kept, kept / widest};
}

double explicit_constraint_similarity(const ConstraintSpec& x_test,
                                      const ConstraintSpec& x_j, TaskKind task) {
  return explicit_constraint_match(x_test, x_j, task).score;
}

bool ranks_before(const ScoredExemplar& a, const ScoredExemplar& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.coverage != b.coverage) return a.coverage > b.coverage;
  return a.exemplar->id < b.exemplar->id;
}

double content_similarity(const BoundingBox& m_test, const BoundingBox& m_j) {
  return box_iou(m_test, m_j);
}

MatchScore similarity(const Query& query, const Exemplar& exemplar, TaskKind task) {
  switch (task) {
    case TaskKind::ContentAware: {
      require_matches(task, query.constraint);
      const auto& test_box = std::get<ContentConstraint>(query.constraint).box;
      const BoundingBox ex_box =
          exemplar.saliency_box
              ? *exemplar.saliency_box
              : std::get<ContentConstraint>(exemplar.constraint).box;
      return {content_similarity(test_box, ex_box), 1.0};
    }
    case TaskKind::TextToLayout:
      if (!query.embedding || !exemplar.embedding) {
        throw Error(ErrorKind::InvalidInput,
                    "text similarity needs embeddings for query and exemplar " +
                        exemplar.id);
      }
      return {text_similarity(*query.embedding, *exemplar.embedding), 1.0};
    default:
      return explicit_constraint_match(query.constraint, exemplar.constraint, task);
  }
}

Selection select_top_k(const Query& query, const ExemplarIndex& index, int k) {
  if (index.empty()) {
    throw Error(ErrorKind::InvalidState, "exemplar index is empty");
  }
  if (k < 1) throw Error(ErrorKind::InvalidInput, "k must be at least 1");

  Selection sel;
  std::vector<ScoredExemplar> scored;
  scored.reserve(index.size());
  for (const auto& ex : index.exemplars()) {
    const MatchScore m = similarity(query, ex, index.task());
    scored.push_back({&ex, m.score, m.coverage});
  }
  std::size_t take = static_cast<std::size_t>(k);
  if (take > scored.size()) {
    sel.warnings.push_back("requested " + std::to_string(k) +
                           " exemplars but index holds " +
                           std::to_string(scored.size()));
    take = scored.size();
  }
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end(), ranks_before);
  scored.resize(take);
  sel.items = std::move(scored);
  return sel;
}

}  // namespace layoutgen
