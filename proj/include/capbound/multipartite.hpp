// Copyright (c) 2026 capbound contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "capbound/matrix.hpp"

namespace capbound {

// Operator on a tensor product of named subsystems. Subsystem ordering is
// significant and fixed by the labels list; the first label is the most
// significant index of the row-major composite index.
struct MultipartiteOperator {
  cmat mat;
  std::vector<int> dims;
  std::vector<std::string> labels;

  MultipartiteOperator() = default;

  MultipartiteOperator(cmat m, std::vector<int> d, std::vector<std::string> l)
      : mat(std::move(m)), dims(std::move(d)), labels(std::move(l)) {
    long prod = 1;
    for (int x : dims) prod *= x;
    require(dims.size() == labels.size(), "multipartite: dims/labels size mismatch");
    require(mat.rows() == prod && mat.cols() == prod,
            "multipartite: matrix side does not match product of dims");
    std::set<std::string> uniq(labels.begin(), labels.end());
    require(uniq.size() == labels.size(), "multipartite: duplicate labels");
  }

  int total_dim() const { return static_cast<int>(mat.rows()); }

  int index_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    require(it != labels.end(), "multipartite: unknown label '" + label + "'");
    return static_cast<int>(it - labels.begin());
  }
};

namespace detail {

inline std::vector<int> unpack_index(long idx, const std::vector<int>& dims) {
  std::vector<int> out(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = static_cast<int>(idx % dims[k]);
    idx /= dims[k];
  }
  return out;
}

inline long pack_index(const std::vector<int>& multi, const std::vector<int>& dims) {
  long idx = 0;
  for (size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + multi[k];
  return idx;
}

}  // namespace detail

inline MultipartiteOperator partial_trace(const MultipartiteOperator& op,
                                          const std::vector<std::string>& traced) {
  std::vector<bool> keep(op.dims.size(), true);
  for (const auto& t : traced) keep[op.index_of(t)] = false;

  std::vector<int> out_dims, env_dims;
  std::vector<std::string> out_labels;
  std::vector<int> out_pos, env_pos;
  for (size_t k = 0; k < op.dims.size(); ++k) {
    if (keep[k]) {
      out_dims.push_back(op.dims[k]);
      out_labels.push_back(op.labels[k]);
      out_pos.push_back(static_cast<int>(k));
    } else {
      env_dims.push_back(op.dims[k]);
      env_pos.push_back(static_cast<int>(k));
    }
  }
  long dout = 1, denv = 1;
  for (int x : out_dims) dout *= x;
  for (int x : env_dims) denv *= x;

  cmat res = cmat::Zero(dout, dout);
  std::vector<int> full(op.dims.size());
  for (long r = 0; r < dout; ++r) {
    auto rm = detail::unpack_index(r, out_dims);
    for (long c = 0; c < dout; ++c) {
      auto cm = detail::unpack_index(c, out_dims);
      cplx acc = 0.0;
      for (long e = 0; e < denv; ++e) {
        auto em = detail::unpack_index(e, env_dims);
        for (size_t k = 0; k < out_pos.size(); ++k) full[out_pos[k]] = rm[k];
        for (size_t k = 0; k < env_pos.size(); ++k) full[env_pos[k]] = em[k];
        long fr = detail::pack_index(full, op.dims);
        for (size_t k = 0; k < out_pos.size(); ++k) full[out_pos[k]] = cm[k];
        long fc = detail::pack_index(full, op.dims);
        acc += op.mat(fr, fc);
      }
      res(r, c) = acc;
    }
  }
  if (out_dims.empty()) {
    // trace over everything: 1x1 remainder on a placeholder system
    return MultipartiteOperator(res, {1}, {"_scalar"});
  }
  return MultipartiteOperator(std::move(res), std::move(out_dims), std::move(out_labels));
}

inline MultipartiteOperator partial_transpose(const MultipartiteOperator& op,
                                              const std::string& sub) {
  int pos = op.index_of(sub);
  long d = op.total_dim();
  cmat res(d, d);
  for (long r = 0; r < d; ++r) {
    auto rm = detail::unpack_index(r, op.dims);
    for (long c = 0; c < d; ++c) {
      auto cm = detail::unpack_index(c, op.dims);
      std::swap(rm[pos], cm[pos]);
      long tr = detail::pack_index(rm, op.dims);
      long tc = detail::pack_index(cm, op.dims);
      std::swap(rm[pos], cm[pos]);
      res(tr, tc) = op.mat(r, c);
    }
  }
  return MultipartiteOperator(std::move(res), op.dims, op.labels);
}

}  // namespace capbound
