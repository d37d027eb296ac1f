// Value function, solution sets, level sets and the lambda-truncated problem.
#pragma once

#include <map>
#include <memory>
#include <string>

#include "paramin/problem.hpp"
#include "paramin/slice.hpp"

namespace paramin {

struct Tolerances {
  double check = 1e-7;
  double argmin = 1e-9;
  double refine = 1e-10;
  int grid = 257;
};

struct MinResult {
  ExtendedReal value = ExtendedReal::pos_inf();
  bool attained = false;
  IntervalSet argmin;
  long evaluations = 0;
};

/// What the checks see: a feasible mapping and a cost slice at each parameter.
/// Every query is counted so checks can enforce their budget.
class Model {
 public:
  virtual ~Model() = default;
  virtual const Problem& problem() const = 0;
  virtual const IntervalSet& feasible(const TaggedPoint& z) = 0;
  /// cost over feasible(z)
  virtual const Slice& slice(const TaggedPoint& z) = 0;
  /// the model's own cost at z over an arbitrary set
  virtual const Slice& slice_on(const TaggedPoint& z, const IntervalSet& s) = 0;
  virtual std::string name() const = 0;

  bool in_domain(const TaggedPoint& z) const { return problem().in_window(z); }
  long queries() const { return queries_; }

 protected:
  long queries_ = 0;
};

class ProblemModel : public Model {
 public:
  explicit ProblemModel(const Problem& p, Tolerances tol = {}) : p_(p), tol_(tol) {}

  const Problem& problem() const override { return p_; }
  std::string name() const override { return "base"; }
  const Tolerances& tolerances() const { return tol_; }

  std::shared_ptr<const YProgram> program(const TaggedPoint& z) {
    auto key = z.str();
    auto it = programs_.find(key);
    if (it != programs_.end()) return it->second;
    auto prog = std::make_shared<const YProgram>(specialize(*p_.u, z, p_.eval));
    programs_.emplace(key, prog);
    return prog;
  }

  const IntervalSet& feasible(const TaggedPoint& z) override {
    ++queries_;
    auto key = z.str();
    auto it = sets_.find(key);
    if (it != sets_.end()) return it->second;
    return sets_.emplace(key, p_.feasible(z)).first->second;
  }

  const Slice& slice(const TaggedPoint& z) override { return slice_on(z, feasible(z)); }

  const Slice& slice_on(const TaggedPoint& z, const IntervalSet& s) override {
    ++queries_;
    auto key = z.str() + "|" + s.str();
    auto it = slices_.find(key);
    if (it != slices_.end()) return *it->second;
    SliceOptions opt;
    opt.grid = tol_.grid;
    opt.refine_tol = tol_.refine;
    opt.argmin_tol = tol_.argmin;
    opt.scale = std::max(1.0, std::fabs(z.numeric()));
    auto sl = std::make_unique<Slice>(program(z), s, opt);
    return *slices_.emplace(key, std::move(sl)).first->second;
  }

  std::size_t cached_slices() const { return slices_.size(); }

 private:
  const Problem& p_;
  Tolerances tol_;
  std::map<std::string, std::shared_ptr<const YProgram>> programs_;
  std::map<std::string, IntervalSet> sets_;
  std::map<std::string, std::unique_ptr<Slice>> slices_;
};

inline MinResult to_result(const Slice& s) {
  MinResult r;
  r.value = s.value();
  r.attained = s.attained();
  r.argmin = s.argmin();
  r.evaluations = s.evaluations();
  return r;
}

/// v(x), with the attaining set.  Phi(x) empty gives +inf, unattained.
inline MinResult value(const Problem& p, const TaggedPoint& x, const Tolerances& tol = {}) {
  if (!p.in_x_domain(x)) throw DomainError("x=" + x.str() + " is outside x_domain");
  ProblemModel m(p, tol);
  return to_result(m.slice(x));
}

inline IntervalSet solution_set(const Problem& p, const TaggedPoint& x, const Tolerances& tol = {}) {
  return value(p, x, tol).argmin;
}

inline IntervalSet level_set(const Problem& p, const TaggedPoint& x, const ExtendedReal& lambda,
                             const Tolerances& tol = {}) {
  ProblemModel m(p, tol);
  return m.slice(x).level_set(lambda);
}

// ---------------------------------------------------------------- truncation

struct TruncatedProblem {
  const Problem* base = nullptr;
  ExtendedReal lambda;
  TaggedPoint x_anchor;
  IntervalSet anchor_set;  // Phi_{lambda,x}(x)
  bool anchor_empty = true;
};

inline TruncatedProblem truncate(ProblemModel& m, const ExtendedReal& lambda, const TaggedPoint& x) {
  TruncatedProblem tp;
  tp.base = &m.problem();
  tp.lambda = lambda;
  tp.x_anchor = x;
  tp.anchor_set = m.slice(x).level_set(lambda);
  tp.anchor_empty = tp.anchor_set.empty();
  return tp;
}

/// Phi_{lambda,x} and u_{lambda,x} as a model: at z the sub-level set of
/// u(z, .) when it is nonempty (or z = x), otherwise the anchor set with the
/// cost frozen at x.
class TruncatedModel : public Model {
 public:
  TruncatedModel(ProblemModel& base, TruncatedProblem tp) : base_(base), tp_(std::move(tp)) {}

  const Problem& problem() const override { return base_.problem(); }
  std::string name() const override { return "truncated(lambda=" + tp_.lambda.str() + ")"; }
  const TruncatedProblem& truncation() const { return tp_; }

  /// true when z keeps its own sub-level set
  bool own_level(const TaggedPoint& z) {
    if (z == tp_.x_anchor) return true;
    return !base_.slice(z).level_set(tp_.lambda).empty();
  }

  const IntervalSet& feasible(const TaggedPoint& z) override {
    ++queries_;
    auto key = z.str();
    auto it = sets_.find(key);
    if (it != sets_.end()) return it->second;
    IntervalSet s = own_level(z) ? base_.slice(z).level_set(tp_.lambda) : tp_.anchor_set;
    return sets_.emplace(key, std::move(s)).first->second;
  }

  const Slice& slice(const TaggedPoint& z) override { return slice_on(z, feasible(z)); }

  const Slice& slice_on(const TaggedPoint& z, const IntervalSet& s) override {
    ++queries_;
    return base_.slice_on(own_level(z) ? z : tp_.x_anchor, s);
  }

 private:
  ProblemModel& base_;
  TruncatedProblem tp_;
  std::map<std::string, IntervalSet> sets_;
};

/// v_{lambda,x}(z) and its solution set.
inline MinResult truncated_value(TruncatedModel& tm, const TaggedPoint& z) {
  if (tm.truncation().anchor_empty)
    throw DomainError("truncated mapping is empty at its anchor (lambda below the value)");
  return to_result(tm.slice(z));
}

}  // namespace paramin
