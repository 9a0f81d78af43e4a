#include "tb/autodiff.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "tb/errors.hpp"
#include "tb/kernels.hpp"

namespace tb::ad {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

std::shared_ptr<Node> new_node(Tensor value, std::vector<std::shared_ptr<Node>> inputs,
                               std::function<void(Node&)> backprop) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->inputs = std::move(inputs);
    bool req = false;
    for (const auto& in : n->inputs) req = req || in->requires_grad;
    n->requires_grad = req;
    if (req) n->backprop = std::move(backprop);
    return n;
}

void check_same_shape(const Var& a, const Var& b, const char* op) {
    if (!a.value().same_shape(b.value())) {
        throw ArgumentError(std::string(op) + ": shape mismatch " +
                            a.value().shape_str() + " vs " + b.value().shape_str());
    }
}

}  // namespace

void Node::accumulate(const Tensor& g) {
    ensure_grad();
    kern::axpy(g.size(), 1.0, g.data(), grad.data());
}

Var constant(Tensor value) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->requires_grad = false;
    return Var(n);
}

Var make_param(Tensor value) {
    auto n = std::make_shared<Node>();
    n->value = std::move(value);
    n->requires_grad = true;
    return Var(n);
}

void zero_grad(const Var& p) {
    auto& n = *p.node();
    n.ensure_grad();
    n.grad.fill(0.0);
}

void backward(const Var& root) {
    if (root.value().size() != 1) {
        throw ArgumentError("backward: root must be scalar, got shape " +
                            root.value().shape_str());
    }
    // Iterative post-order DFS (graphs can be deep at generation time).
    std::vector<Node*> order;
    std::unordered_set<Node*> visited;
    std::vector<std::pair<Node*, std::size_t>> stack;
    stack.emplace_back(root.node().get(), 0);
    visited.insert(root.node().get());
    while (!stack.empty()) {
        auto& [node, next_child] = stack.back();
        if (!node->requires_grad) {  // frozen subgraph, nothing to do below it
            order.push_back(node);
            stack.pop_back();
            continue;
        }
        if (next_child < node->inputs.size()) {
            Node* child = node->inputs[next_child].get();
            ++next_child;
            if (child->requires_grad && visited.insert(child).second) {
                stack.emplace_back(child, 0);
            }
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
    root.node()->ensure_grad();
    root.node()->grad[0] += 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Node* n = *it;
        if (n->requires_grad && n->backprop) n->backprop(*n);
    }
}

// ---------------------------------------------------------------------------
// elementwise

Var add(const Var& a, const Var& b) {
    check_same_shape(a, b, "add");
    Tensor out(a.value().shape());
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = a.value()[i] + b.value()[i];
    return Var(new_node(std::move(out), {a.node(), b.node()}, [](Node& self) {
        for (auto& in : self.inputs) {
            if (in->requires_grad) in->accumulate(self.grad);
        }
    }));
}

Var sub(const Var& a, const Var& b) {
    check_same_shape(a, b, "sub");
    Tensor out(a.value().shape());
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = a.value()[i] - b.value()[i];
    return Var(new_node(std::move(out), {a.node(), b.node()}, [](Node& self) {
        if (self.inputs[0]->requires_grad) self.inputs[0]->accumulate(self.grad);
        auto& bn = *self.inputs[1];
        if (bn.requires_grad) {
            bn.ensure_grad();
            kern::axpy(self.grad.size(), -1.0, self.grad.data(), bn.grad.data());
        }
    }));
}

Var mul(const Var& a, const Var& b) {
    check_same_shape(a, b, "mul");
    Tensor out(a.value().shape());
    kern::hadamard(out.size(), a.value().data(), b.value().data(), out.data());
    return Var(new_node(std::move(out), {a.node(), b.node()}, [](Node& self) {
        auto& an = *self.inputs[0];
        auto& bn = *self.inputs[1];
        if (an.requires_grad) {
            an.ensure_grad();
            kern::hadamard(self.grad.size(), self.grad.data(), bn.value.data(),
                           an.grad.data(), /*accumulate=*/true);
        }
        if (bn.requires_grad) {
            bn.ensure_grad();
            kern::hadamard(self.grad.size(), self.grad.data(), an.value.data(),
                           bn.grad.data(), /*accumulate=*/true);
        }
    }));
}

Var scale(const Var& a, double c) {
    Tensor out(a.value().shape());
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = a.value()[i] * c;
    return Var(new_node(std::move(out), {a.node()}, [c](Node& self) {
        auto& an = *self.inputs[0];
        if (an.requires_grad) {
            an.ensure_grad();
            kern::axpy(self.grad.size(), c, self.grad.data(), an.grad.data());
        }
    }));
}

Var add_rowvec(const Var& x, const Var& v) {
    const auto& xs = x.value().shape();
    if (xs.size() != 2 || v.value().size() != xs[1]) {
        throw ArgumentError("add_rowvec: need x[m,n] and v[n]");
    }
    const std::size_t m = xs[0], n = xs[1];
    Tensor out(xs);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) = x.value().at(i, j) + v.value()[j];
    return Var(new_node(std::move(out), {x.node(), v.node()}, [m, n](Node& self) {
        auto& xn = *self.inputs[0];
        auto& vn = *self.inputs[1];
        if (xn.requires_grad) xn.accumulate(self.grad);
        if (vn.requires_grad) {
            vn.ensure_grad();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) vn.grad[j] += self.grad.at(i, j);
        }
    }));
}

Var mul_rowvec(const Var& x, const Var& v) {
    const auto& xs = x.value().shape();
    if (xs.size() != 2 || v.value().size() != xs[1]) {
        throw ArgumentError("mul_rowvec: need x[m,n] and v[n]");
    }
    const std::size_t m = xs[0], n = xs[1];
    Tensor out(xs);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) = x.value().at(i, j) * v.value()[j];
    return Var(new_node(std::move(out), {x.node(), v.node()}, [m, n](Node& self) {
        auto& xn = *self.inputs[0];
        auto& vn = *self.inputs[1];
        if (xn.requires_grad) {
            xn.ensure_grad();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    xn.grad.at(i, j) += self.grad.at(i, j) * vn.value[j];
        }
        if (vn.requires_grad) {
            vn.ensure_grad();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    vn.grad[j] += self.grad.at(i, j) * xn.value.at(i, j);
        }
    }));
}

Var bscale(const Var& x, const Var& s) {
    if (s.value().size() != 1) throw ArgumentError("bscale: s must be scalar");
    Tensor out(x.value().shape());
    const double sv = s.value()[0];
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = x.value()[i] * sv;
    return Var(new_node(std::move(out), {x.node(), s.node()}, [](Node& self) {
        auto& xn = *self.inputs[0];
        auto& sn = *self.inputs[1];
        if (xn.requires_grad) {
            xn.ensure_grad();
            kern::axpy(self.grad.size(), sn.value[0], self.grad.data(), xn.grad.data());
        }
        if (sn.requires_grad) {
            sn.ensure_grad();
            double acc = 0.0;
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                acc += self.grad[i] * xn.value[i];
            sn.grad[0] += acc;
        }
    }));
}

Var gelu(const Var& x) {
    Tensor out(x.value().shape());
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = x.value()[i];
        out[i] = 0.5 * v * (1.0 + std::erf(v * kInvSqrt2));
    }
    return Var(new_node(std::move(out), {x.node()}, [](Node& self) {
        auto& xn = *self.inputs[0];
        if (!xn.requires_grad) return;
        xn.ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
            const double v = xn.value[i];
            const double cdf = 0.5 * (1.0 + std::erf(v * kInvSqrt2));
            const double pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
            xn.grad[i] += self.grad[i] * (cdf + v * pdf);
        }
    }));
}

Var tanh_ew(const Var& x) {
    Tensor out(x.value().shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(x.value()[i]);
    return Var(new_node(std::move(out), {x.node()}, [](Node& self) {
        auto& xn = *self.inputs[0];
        if (!xn.requires_grad) return;
        xn.ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
            const double t = self.value[i];
            xn.grad[i] += self.grad[i] * (1.0 - t * t);
        }
    }));
}

Var sqrt_ew(const Var& x) {
    Tensor out(x.value().shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(x.value()[i]);
    return Var(new_node(std::move(out), {x.node()}, [](Node& self) {
        auto& xn = *self.inputs[0];
        if (!xn.requires_grad) return;
        xn.ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
            xn.grad[i] += self.grad[i] * 0.5 / self.value[i];
        }
    }));
}

Var clamp_min(const Var& x, double lo) {
    Tensor out(x.value().shape());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = x.value()[i] < lo ? lo : x.value()[i];
    return Var(new_node(std::move(out), {x.node()}, [lo](Node& self) {
        auto& xn = *self.inputs[0];
        if (!xn.requires_grad) return;
        xn.ensure_grad();
        for (std::size_t i = 0; i < self.grad.size(); ++i) {
            if (xn.value[i] >= lo) xn.grad[i] += self.grad[i];
        }
    }));
}

Var div_ew(const Var& a, const Var& b) {
    check_same_shape(a, b, "div_ew");
    Tensor out(a.value().shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] / b.value()[i];
    return Var(new_node(std::move(out), {a.node(), b.node()}, [](Node& self) {
        auto& an = *self.inputs[0];
        auto& bn = *self.inputs[1];
        if (an.requires_grad) {
            an.ensure_grad();
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                an.grad[i] += self.grad[i] / bn.value[i];
        }
        if (bn.requires_grad) {
            bn.ensure_grad();
            for (std::size_t i = 0; i < self.grad.size(); ++i)
                bn.grad[i] -= self.grad[i] * self.value[i] / bn.value[i];
        }
    }));
}

// ---------------------------------------------------------------------------
// linear algebra

Var matmul(const Var& a, const Var& b) {
    const auto& as = a.value().shape();
    const auto& bs = b.value().shape();
    if (as.size() != 2 || bs.size() != 2 || as[1] != bs[0]) {
        throw ArgumentError("matmul: incompatible shapes " + a.value().shape_str() +
                            " x " + b.value().shape_str());
    }
    const std::size_t m = as[0], k = as[1], n = bs[1];
    Tensor out({m, n});
    kern::matmul(a.value().data(), b.value().data(), out.data(), m, k, n);
    return Var(new_node(std::move(out), {a.node(), b.node()}, [m, k, n](Node& self) {
        auto& an = *self.inputs[0];
        auto& bn = *self.inputs[1];
        if (an.requires_grad) {
            an.ensure_grad();  // dA += dC * B^T
            kern::matmul_nt(self.grad.data(), bn.value.data(), an.grad.data(), m, n, k,
                            /*accumulate=*/true);
        }
        if (bn.requires_grad) {
            bn.ensure_grad();  // dB += A^T * dC
            kern::matmul_tn(an.value.data(), self.grad.data(), bn.grad.data(), m, k, n,
                            /*accumulate=*/true);
        }
    }));
}

Var matmul_nt(const Var& a, const Var& b) {
    const auto& as = a.value().shape();
    const auto& bs = b.value().shape();
    if (as.size() != 2 || bs.size() != 2 || as[1] != bs[1]) {
        throw ArgumentError("matmul_nt: incompatible shapes " + a.value().shape_str() +
                            " x " + b.value().shape_str() + "^T");
    }
    const std::size_t m = as[0], k = as[1], n = bs[0];
    Tensor out({m, n});
    kern::matmul_nt(a.value().data(), b.value().data(), out.data(), m, k, n);
    return Var(new_node(std::move(out), {a.node(), b.node()}, [m, k, n](Node& self) {
        auto& an = *self.inputs[0];
        auto& bn = *self.inputs[1];
        if (an.requires_grad) {
            an.ensure_grad();  // dA += dC * B
            kern::matmul(self.grad.data(), bn.value.data(), an.grad.data(), m, n, k,
                         /*accumulate=*/true);
        }
        if (bn.requires_grad) {
            bn.ensure_grad();  // dB += dC^T * A
            kern::matmul_tn(self.grad.data(), an.value.data(), bn.grad.data(), m, n, k,
                            /*accumulate=*/true);
        }
    }));
}

// ---------------------------------------------------------------------------
// structure

Var gather_rows(const Var& table, std::vector<std::size_t> ids) {
    const auto& ts = table.value().shape();
    if (ts.size() != 2) throw ArgumentError("gather_rows: table must be 2-d");
    const std::size_t rows = ts[0], d = ts[1];
    for (std::size_t id : ids) {
        if (id >= rows) {
            throw ArgumentError("gather_rows: id " + std::to_string(id) +
                                " out of range (table has " + std::to_string(rows) +
                                " rows)");
        }
    }
    Tensor out({ids.size(), d});
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) out.at(i, j) = table.value().at(ids[i], j);
    return Var(new_node(std::move(out), {table.node()},
                        [ids = std::move(ids), d](Node& self) {
                            auto& tn = *self.inputs[0];
                            if (!tn.requires_grad) return;
                            tn.ensure_grad();
                            for (std::size_t i = 0; i < ids.size(); ++i)
                                for (std::size_t j = 0; j < d; ++j)
                                    tn.grad.at(ids[i], j) += self.grad.at(i, j);
                        }));
}

Var concat_rows(const std::vector<Var>& parts) {
    if (parts.empty()) throw ArgumentError("concat_rows: empty input");
    const std::size_t d = parts[0].value().shape().back();
    std::size_t total = 0;
    std::vector<std::shared_ptr<Node>> inputs;
    for (const auto& p : parts) {
        const auto& s = p.value().shape();
        if (s.size() != 2 || s[1] != d) throw ArgumentError("concat_rows: column mismatch");
        total += s[0];
        inputs.push_back(p.node());
    }
    Tensor out({total, d});
    std::size_t r = 0;
    for (const auto& p : parts) {
        const std::size_t pr = p.value().shape()[0];
        std::copy(p.value().data(), p.value().data() + pr * d, out.data() + r * d);
        r += pr;
    }
    return Var(new_node(std::move(out), std::move(inputs), [d](Node& self) {
        std::size_t r = 0;
        for (auto& in : self.inputs) {
            const std::size_t pr = in->value.shape()[0];
            if (in->requires_grad) {
                in->ensure_grad();
                kern::axpy(pr * d, 1.0, self.grad.data() + r * d, in->grad.data());
            }
            r += pr;
        }
    }));
}

Var concat_cols(const std::vector<Var>& parts) {
    if (parts.empty()) throw ArgumentError("concat_cols: empty input");
    const std::size_t m = parts[0].value().shape()[0];
    std::size_t total = 0;
    std::vector<std::shared_ptr<Node>> inputs;
    for (const auto& p : parts) {
        const auto& s = p.value().shape();
        if (s.size() != 2 || s[0] != m) throw ArgumentError("concat_cols: row mismatch");
        total += s[1];
        inputs.push_back(p.node());
    }
    Tensor out({m, total});
    std::size_t c = 0;
    for (const auto& p : parts) {
        const std::size_t pc = p.value().shape()[1];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < pc; ++j) out.at(i, c + j) = p.value().at(i, j);
        c += pc;
    }
    return Var(new_node(std::move(out), std::move(inputs), [m](Node& self) {
        std::size_t c = 0;
        for (auto& in : self.inputs) {
            const std::size_t pc = in->value.shape()[1];
            if (in->requires_grad) {
                in->ensure_grad();
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < pc; ++j)
                        in->grad.at(i, j) += self.grad.at(i, c + j);
            }
            c += pc;
        }
    }));
}

Var slice_cols(const Var& x, std::size_t c0, std::size_t len) {
    const auto& xs = x.value().shape();
    if (xs.size() != 2 || c0 + len > xs[1]) throw ArgumentError("slice_cols: out of range");
    const std::size_t m = xs[0];
    Tensor out({m, len});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < len; ++j) out.at(i, j) = x.value().at(i, c0 + j);
    return Var(new_node(std::move(out), {x.node()}, [m, c0, len](Node& self) {
        auto& xn = *self.inputs[0];
        if (!xn.requires_grad) return;
        xn.ensure_grad();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < len; ++j)
                xn.grad.at(i, c0 + j) += self.grad.at(i, j);
    }));
}

Var reshape(const Var& x, std::vector<std::size_t> new_shape) {
    if (shape_numel(new_shape) != x.value().size()) {
        throw ArgumentError("reshape: element count mismatch");
    }
    Tensor out(std::move(new_shape), x.value().vec());
    return Var(new_node(std::move(out), {x.node()}, [](Node& self) {
        auto& xn = *self.inputs[0];
        if (!xn.requires_grad) return;
        xn.ensure_grad();
        kern::axpy(self.grad.size(), 1.0, self.grad.data(), xn.grad.data());
    }));
}

Var permute_gather(const Var& x, std::vector<std::size_t> index,
                   std::vector<std::size_t> out_shape) {
    if (shape_numel(out_shape) != index.size()) {
        throw ArgumentError("permute_gather: index size does not match out_shape");
    }
    Tensor out(std::move(out_shape));
    for (std::size_t i = 0; i < index.size(); ++i) out[i] = x.value()[index[i]];
    return Var(new_node(std::move(out), {x.node()}, [index = std::move(index)](Node& self) {
        auto& xn = *self.inputs[0];
        if (!xn.requires_grad) return;
        xn.ensure_grad();
        for (std::size_t i = 0; i < index.size(); ++i)
            xn.grad[index[i]] += self.grad[i];
    }));
}

// ---------------------------------------------------------------------------
// rowwise / reductions

Var layer_norm(const Var& x, const Var& gamma, const Var& beta, double eps) {
    const auto& xs = x.value().shape();
    if (xs.size() != 2 || gamma.value().size() != xs[1] || beta.value().size() != xs[1]) {
        throw ArgumentError("layer_norm: need x[m,n], gamma[n], beta[n]");
    }
    const std::size_t m = xs[0], n = xs[1];
    Tensor out(xs);
    Tensor xhat(xs);          // saved for backward
    Tensor inv_std({m});
    for (std::size_t i = 0; i < m; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < n; ++j) mean += x.value().at(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d = x.value().at(i, j) - mean;
            var += d * d;
        }
        var /= static_cast<double>(n);
        const double is = 1.0 / std::sqrt(var + eps);
        inv_std[i] = is;
        for (std::size_t j = 0; j < n; ++j) {
            const double xh = (x.value().at(i, j) - mean) * is;
            xhat.at(i, j) = xh;
            out.at(i, j) = gamma.value()[j] * xh + beta.value()[j];
        }
    }
    return Var(new_node(
        std::move(out), {x.node(), gamma.node(), beta.node()},
        [m, n, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& self) {
            auto& xn = *self.inputs[0];
            auto& gn = *self.inputs[1];
            auto& bn = *self.inputs[2];
            if (gn.requires_grad) {
                gn.ensure_grad();
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        gn.grad[j] += self.grad.at(i, j) * xhat.at(i, j);
            }
            if (bn.requires_grad) {
                bn.ensure_grad();
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j) bn.grad[j] += self.grad.at(i, j);
            }
            if (xn.requires_grad) {
                xn.ensure_grad();
                for (std::size_t i = 0; i < m; ++i) {
                    double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        const double dxh = self.grad.at(i, j) * gn.value[j];
                        sum_dxhat += dxh;
                        sum_dxhat_xhat += dxh * xhat.at(i, j);
                    }
                    const double inv_n = 1.0 / static_cast<double>(n);
                    for (std::size_t j = 0; j < n; ++j) {
                        const double dxh = self.grad.at(i, j) * gn.value[j];
                        xn.grad.at(i, j) += inv_std[i] * (dxh - inv_n * sum_dxhat -
                                                          xhat.at(i, j) * inv_n * sum_dxhat_xhat);
                    }
                }
            }
        }));
}

Var softmax_rows(const Var& x) {
    const auto& xs = x.value().shape();
    if (xs.size() != 2) throw ArgumentError("softmax_rows: x must be 2-d");
    const std::size_t m = xs[0], n = xs[1];
    Tensor out(xs);
    for (std::size_t i = 0; i < m; ++i) {
        double mx = x.value().at(i, 0);
        for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, x.value().at(i, j));
        double z = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double e = std::exp(x.value().at(i, j) - mx);
            out.at(i, j) = e;
            z += e;
        }
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) /= z;
    }
    return Var(new_node(std::move(out), {x.node()}, [m, n](Node& self) {
        auto& xn = *self.inputs[0];
        if (!xn.requires_grad) return;
        xn.ensure_grad();
        for (std::size_t i = 0; i < m; ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                dot += self.grad.at(i, j) * self.value.at(i, j);
            for (std::size_t j = 0; j < n; ++j)
                xn.grad.at(i, j) += self.value.at(i, j) * (self.grad.at(i, j) - dot);
        }
    }));
}

Var row_dot(const Var& a, const Var& b) {
    check_same_shape(a, b, "row_dot");
    const auto& s = a.value().shape();
    if (s.size() != 2) throw ArgumentError("row_dot: inputs must be 2-d");
    const std::size_t m = s[0], n = s[1];
    Tensor out({m});
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += a.value().at(i, j) * b.value().at(i, j);
        out[i] = acc;
    }
    return Var(new_node(std::move(out), {a.node(), b.node()}, [m, n](Node& self) {
        auto& an = *self.inputs[0];
        auto& bn = *self.inputs[1];
        if (an.requires_grad) {
            an.ensure_grad();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    an.grad.at(i, j) += self.grad[i] * bn.value.at(i, j);
        }
        if (bn.requires_grad) {
            bn.ensure_grad();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    bn.grad.at(i, j) += self.grad[i] * an.value.at(i, j);
        }
    }));
}

Var mean_rows(const Var& x) {
    const auto& xs = x.value().shape();
    if (xs.size() != 2) throw ArgumentError("mean_rows: x must be 2-d");
    const std::size_t m = xs[0], n = xs[1];
    Tensor out({n});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[j] += x.value().at(i, j);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j) out[j] *= inv_m;
    return Var(new_node(std::move(out), {x.node()}, [m, n, inv_m](Node& self) {
        auto& xn = *self.inputs[0];
        if (!xn.requires_grad) return;
        xn.ensure_grad();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                xn.grad.at(i, j) += self.grad[j] * inv_m;
    }));
}

Var sum_all(const Var& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.value().size(); ++i) acc += x.value()[i];
    Tensor out({1});
    out[0] = acc;
    return Var(new_node(std::move(out), {x.node()}, [](Node& self) {
        auto& xn = *self.inputs[0];
        if (!xn.requires_grad) return;
        xn.ensure_grad();
        const double g = self.grad[0];
        for (std::size_t i = 0; i < xn.grad.size(); ++i) xn.grad[i] += g;
    }));
}

Var mean_all(const Var& x) {
    return scale(sum_all(x), 1.0 / static_cast<double>(x.value().size()));
}

}  // namespace tb::ad
