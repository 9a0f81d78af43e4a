#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "tb/tensor.hpp"

namespace tb::ad {

// Tape-free dynamic graph: every op allocates a Node holding its value and a
// closure that scatters the node's gradient into its inputs. backward() runs
// the closures in reverse topological order. Graphs are rebuilt per training
// step; parameters are long-lived nodes shared across graphs.
struct Node {
    Tensor value;
    Tensor grad;  // allocated lazily on first accumulation
    bool requires_grad = false;
    std::vector<std::shared_ptr<Node>> inputs;
    std::function<void(Node&)> backprop;

    void ensure_grad() {
        if (grad.size() != value.size()) grad = Tensor(value.shape());
    }
    void accumulate(const Tensor& g);
};

class Var {
  public:
    Var() = default;
    explicit Var(std::shared_ptr<Node> n) : node_(std::move(n)) {}

    const Tensor& value() const { return node_->value; }
    Tensor& value() { return node_->value; }
    const Tensor& grad() const { return node_->grad; }
    bool requires_grad() const { return node_ && node_->requires_grad; }
    bool defined() const { return node_ != nullptr; }
    const std::shared_ptr<Node>& node() const { return node_; }

    // Scalar convenience for loss values.
    double item() const { return node_->value[0]; }

  private:
    std::shared_ptr<Node> node_;
};

Var constant(Tensor value);
Var make_param(Tensor value);

void zero_grad(const Var& p);
// Backpropagate from a scalar root (shape {1}).
void backward(const Var& root);

// --- elementwise / broadcast ---
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double c);
Var add_rowvec(const Var& x, const Var& v);  // x[m,n] + v[n] per row
Var mul_rowvec(const Var& x, const Var& v);  // x[m,n] * v[n] per row
Var bscale(const Var& x, const Var& s);      // x * scalar-var s (shape {1})
Var gelu(const Var& x);
Var tanh_ew(const Var& x);
Var sqrt_ew(const Var& x);
Var clamp_min(const Var& x, double lo);
Var div_ew(const Var& a, const Var& b);

// --- linear algebra ---
Var matmul(const Var& a, const Var& b);     // [m,k]x[k,n]
Var matmul_nt(const Var& a, const Var& b);  // [m,k]x[n,k]^T -> [m,n]

// --- structure ---
Var gather_rows(const Var& table, std::vector<std::size_t> ids);
Var concat_rows(const std::vector<Var>& parts);
Var concat_cols(const std::vector<Var>& parts);
Var slice_cols(const Var& x, std::size_t c0, std::size_t len);
Var reshape(const Var& x, std::vector<std::size_t> new_shape);
// out[i] = x[index[i]]; a pure (partial) permutation, e.g. patchify.
Var permute_gather(const Var& x, std::vector<std::size_t> index,
                   std::vector<std::size_t> out_shape);

// --- rowwise / reductions ---
Var layer_norm(const Var& x, const Var& gamma, const Var& beta, double eps = 1e-5);
Var softmax_rows(const Var& x);
Var row_dot(const Var& a, const Var& b);  // [m,n],[m,n] -> [m]
Var mean_rows(const Var& x);              // [m,n] -> [n]
Var sum_all(const Var& x);                // -> {1}
Var mean_all(const Var& x);               // -> {1}

}  // namespace tb::ad
