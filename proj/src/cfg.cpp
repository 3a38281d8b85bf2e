// Copyright 2026 The tiknib Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tiknib/cfg.hpp"

#include <algorithm>
#include <unordered_map>

#include "tiknib/error.hpp"

namespace tiknib {

std::vector<std::vector<std::size_t>> FunctionCFG::successors() const {
  std::vector<std::vector<std::size_t>> out(blocks.size());
  for (const auto& [from, to] : edges) out[from].push_back(to);
  return out;
}

std::vector<std::vector<std::size_t>> FunctionCFG::predecessors() const {
  std::vector<std::vector<std::size_t>> out(blocks.size());
  for (const auto& [from, to] : edges) out[to].push_back(from);
  return out;
}

FunctionCFG build_cfg(const std::vector<Instruction>& instrs) {
  if (instrs.empty()) throw Error(ErrorCode::EmptyInput, "build_cfg: no instructions");
  const std::size_t n = instrs.size();
  std::unordered_map<std::uint64_t, std::size_t> index_of;
  index_of.reserve(n);
  for (std::size_t i = 0; i < n; ++i) index_of.emplace(instrs[i].addr, i);

  // Delay slots stay with their branch, so they never start a block.
  std::vector<bool> is_slot(n, false);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (instrs[i].delay_slot && instrs[i].terminates_block()) is_slot[i + 1] = true;
  }

  std::vector<bool> leader(n, false);
  leader[0] = true;
  auto target_index = [&](const Instruction& ins) -> std::optional<std::size_t> {
    if (ins.flow != FlowKind::jump || ins.indirect || !ins.branch_target) return std::nullopt;
    auto it = index_of.find(*ins.branch_target);
    if (it == index_of.end()) return std::nullopt;
    return it->second;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Instruction& ins = instrs[i];
    if (auto t = target_index(ins); t && !is_slot[*t]) leader[*t] = true;
    if (ins.terminates_block()) {
      std::size_t last = i + ((ins.delay_slot && i + 1 < n) ? 1 : 0);
      if (last + 1 < n) leader[last + 1] = true;
    }
  }

  FunctionCFG cfg;
  std::vector<std::size_t> block_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (leader[i]) {
      cfg.blocks.emplace_back();
      cfg.blocks.back().start = instrs[i].addr;
    }
    cfg.blocks.back().instrs.push_back(instrs[i]);
    block_of[i] = cfg.blocks.size() - 1;
  }

  std::set<Edge> edges;
  std::size_t pos = 0;
  for (std::size_t b = 0; b < cfg.blocks.size(); ++b) {
    const auto& body = cfg.blocks[b].instrs;
    pos += body.size();
    const std::size_t last = pos - 1;
    std::optional<std::size_t> control;
    if (body.size() >= 2 && is_slot[last]) {
      control = last - 1;
    } else if (instrs[last].terminates_block()) {
      control = last;
    }
    const bool has_next = b + 1 < cfg.blocks.size();
    if (!control) {
      if (has_next) edges.emplace(b, b + 1);
      continue;
    }
    const Instruction& c = instrs[*control];
    if (auto t = target_index(c)) edges.emplace(b, block_of[*t]);
    if (c.conditional && has_next) edges.emplace(b, b + 1);
  }
  cfg.edges.assign(edges.begin(), edges.end());
  return cfg;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Reverse postorder of the blocks reachable from the entry.
std::vector<std::size_t> reverse_postorder(const FunctionCFG& cfg,
                                           const std::vector<std::vector<std::size_t>>& succ) {
  const std::size_t n = cfg.blocks.size();
  std::vector<std::size_t> order;
  std::vector<char> seen(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  stack.emplace_back(cfg.entry, 0);
  seen[cfg.entry] = 1;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < succ[node].size()) {
      std::size_t s = succ[node][next++];
      if (!seen[s]) {
        seen[s] = 1;
        stack.emplace_back(s, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  std::reverse(order.begin(), order.end());
  return order;
}

// Iterative immediate-dominator computation (Cooper, Harvey and Kennedy).
// idom[entry] == entry; unreachable blocks get kNone.
std::vector<std::size_t> immediate_dominators(const FunctionCFG& cfg) {
  const std::size_t n = cfg.blocks.size();
  auto succ = cfg.successors();
  auto pred = cfg.predecessors();
  auto rpo = reverse_postorder(cfg, succ);
  std::vector<std::size_t> rank(n, kNone);
  for (std::size_t i = 0; i < rpo.size(); ++i) rank[rpo[i]] = i;

  std::vector<std::size_t> idom(n, kNone);
  idom[cfg.entry] = cfg.entry;
  auto intersect = [&](std::size_t a, std::size_t b) {
    while (a != b) {
      while (rank[a] > rank[b]) a = idom[a];
      while (rank[b] > rank[a]) b = idom[b];
    }
    return a;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 1; i < rpo.size(); ++i) {
      std::size_t b = rpo[i];
      std::size_t candidate = kNone;
      for (std::size_t p : pred[b]) {
        if (idom[p] == kNone) continue;
        candidate = candidate == kNone ? p : intersect(p, candidate);
      }
      if (candidate != idom[b]) {
        idom[b] = candidate;
        changed = true;
      }
    }
  }
  return idom;
}

bool dominates(const std::vector<std::size_t>& idom, std::size_t entry, std::size_t d,
               std::size_t b) {
  if (idom[b] == kNone || idom[d] == kNone) return false;
  for (;;) {
    if (b == d) return true;
    if (b == entry) return false;
    b = idom[b];
  }
}

std::vector<std::vector<std::size_t>> tarjan_sccs(const std::vector<std::vector<std::size_t>>& succ) {
  const std::size_t n = succ.size();
  std::vector<std::size_t> index(n, kNone), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;
  std::vector<std::pair<std::size_t, std::size_t>> call;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < succ[v].size()) {
        std::size_t w = succ[v][next++];
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      std::size_t finished = v;
      call.pop_back();
      if (!call.empty()) {
        std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::vector<bool>> dominators(const FunctionCFG& cfg) {
  const std::size_t n = cfg.blocks.size();
  auto idom = immediate_dominators(cfg);
  std::vector<std::vector<bool>> dom(n, std::vector<bool>(n, false));
  for (std::size_t b = 0; b < n; ++b) {
    if (idom[b] == kNone) continue;
    for (std::size_t d = b;; d = idom[d]) {
      dom[b][d] = true;
      if (d == cfg.entry) break;
    }
  }
  return dom;
}

LoopInfo analyze_loops(const FunctionCFG& cfg) {
  LoopInfo info;
  if (cfg.blocks.empty()) return info;
  auto idom = immediate_dominators(cfg);
  auto pred = cfg.predecessors();

  for (const auto& [tail, head] : cfg.edges) {
    if (dominates(idom, cfg.entry, head, tail)) info.back_edges.emplace_back(tail, head);
  }

  std::map<std::size_t, std::set<std::size_t>> bodies;
  for (const auto& [tail, head] : info.back_edges) {
    auto& body = bodies[head];
    body.insert(head);
    std::vector<std::size_t> work;
    if (body.insert(tail).second) work.push_back(tail);
    while (!work.empty()) {
      std::size_t b = work.back();
      work.pop_back();
      for (std::size_t p : pred[b]) {
        if (idom[p] == kNone) continue;  // unreachable
        if (body.insert(p).second) work.push_back(p);
      }
    }
  }
  for (const auto& [head, body] : bodies) {
    info.loop_headers.push_back(head);
    info.loops.emplace_back(body.begin(), body.end());
  }
  for (std::size_t i = 0; i < info.loops.size(); ++i) {
    for (std::size_t j = i + 1; j < info.loops.size(); ++j) {
      const auto& a = bodies[info.loop_headers[i]];
      const auto& b = bodies[info.loop_headers[j]];
      bool shared = std::any_of(a.begin(), a.end(), [&](std::size_t x) { return b.count(x) > 0; });
      if (shared) ++info.inter_loops;
    }
  }
  info.sccs = tarjan_sccs(cfg.successors());
  return info;
}

CallGraph build_callgraph(const std::vector<DisassembledFunction>& functions,
                          const LoadedBinary* binary) {
  CallGraph cg;
  std::unordered_map<std::uint64_t, const std::string*> by_start;
  for (const auto& f : functions) {
    cg.nodes.insert(f.name);
    by_start.emplace(f.start, &f.name);
  }
  for (const auto& f : functions) {
    for (const auto& ins : f.instrs) {
      if (ins.flow != FlowKind::call || ins.indirect || !ins.call_target) continue;
      std::optional<std::string> callee;
      bool imported = false;
      if (const auto* addr = std::get_if<std::uint64_t>(&*ins.call_target)) {
        if (auto it = by_start.find(*addr); it != by_start.end()) {
          callee = *it->second;
        } else if (binary) {
          if (auto name = binary->import_at(*addr)) {
            callee = std::move(name);
            imported = true;
          }
        }
      } else {
        const auto& name = std::get<std::string>(*ins.call_target);
        callee = name;
        imported = cg.nodes.count(name) == 0;
      }
      if (!callee) continue;
      if (imported) cg.imported.insert(*callee);
      ++cg.edges[{f.name, *callee}];
    }
  }
  return cg;
}

}  // namespace tiknib
