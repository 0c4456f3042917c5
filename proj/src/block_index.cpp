// Copyright 2026 The sbprune Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sbp/block_index.hpp"

#include <algorithm>
#include <numeric>

#include "sbp/fingerprint.hpp"
#include "sbp/kernels.hpp"

namespace sbp {

PartitionGeometry PartitionGeometry::make(std::uint64_t num_docs, std::uint32_t b, std::uint32_t c) {
  if (b == 0 || b > kMaxBlockSize) throw std::invalid_argument("block size b must lie in [1, 65536]");
  if (c == 0 || c > kMaxSuperblockSize) {
    throw std::invalid_argument("superblock size c must lie in [1, 256] (16-bit child sums)");
  }
  PartitionGeometry g;
  g.block_size = b;
  g.superblock_size = c;
  g.num_docs = num_docs;
  g.num_blocks = (num_docs + b - 1) / b;
  g.num_superblocks = (g.num_blocks + c - 1) / c;
  return g;
}

std::uint32_t PartitionGeometry::child_count(std::uint64_t superblock) const {
  const std::uint64_t first = first_block(superblock);
  if (first >= num_blocks) return 0;
  return static_cast<std::uint32_t>(std::min<std::uint64_t>(superblock_size, num_blocks - first));
}

std::uint32_t PartitionGeometry::docs_in_block(std::uint64_t block) const {
  const std::uint64_t first = block * block_size;
  if (first >= num_docs) return 0;
  return static_cast<std::uint32_t>(std::min<std::uint64_t>(block_size, num_docs - first));
}

DocOrdering DocOrdering::identity(std::size_t num_docs) {
  DocOrdering o;
  o.permutation.resize(num_docs);
  std::iota(o.permutation.begin(), o.permutation.end(), DocId{0});
  return o;
}

void DocOrdering::validate(std::size_t num_docs) const {
  if (permutation.size() != num_docs) throw std::invalid_argument("ordering size does not match corpus");
  std::vector<bool> seen(num_docs, false);
  for (DocId d : permutation) {
    if (d >= num_docs || seen[d]) throw std::invalid_argument("ordering is not a permutation");
    seen[d] = true;
  }
}

std::vector<std::uint32_t> DocOrdering::inverse() const {
  std::vector<std::uint32_t> inv(permutation.size());
  for (std::size_t pos = 0; pos < permutation.size(); ++pos) inv[permutation[pos]] = static_cast<std::uint32_t>(pos);
  return inv;
}

OrderingStrategy parse_ordering_strategy(std::string_view name) {
  if (name == "identity") return OrderingStrategy::kIdentity;
  if (name == "greedy" || name == "greedy-similarity") return OrderingStrategy::kGreedySimilarity;
  throw std::invalid_argument("unknown ordering strategy '" + std::string(name) + "'");
}

namespace {

DocOrdering greedy_similarity(const Corpus& corpus) {
  const std::size_t n = corpus.num_docs();
  // Inverted lists of document ids, ascending.
  std::vector<std::vector<DocId>> postings(corpus.vocab.size());
  for (DocId d = 0; d < n; ++d) {
    for (const auto& e : corpus.docs[d].entries) postings[e.term].push_back(d);
  }

  DocOrdering order;
  order.permutation.reserve(n);
  std::vector<bool> placed(n, false);
  std::vector<std::uint32_t> overlap(n, 0);
  std::vector<DocId> touched;
  DocId lowest_unplaced = 0;

  DocId current = 0;
  for (std::size_t step = 0; step < n; ++step) {
    order.permutation.push_back(current);
    placed[current] = true;
    while (lowest_unplaced < n && placed[lowest_unplaced]) ++lowest_unplaced;
    if (lowest_unplaced == n) break;

    for (const auto& e : corpus.docs[current].entries) {
      for (DocId d : postings[e.term]) {
        if (placed[d]) continue;
        if (overlap[d]++ == 0) touched.push_back(d);
      }
    }
    DocId best = lowest_unplaced;
    std::uint32_t best_overlap = 0;
    for (DocId d : touched) {
      if (overlap[d] > best_overlap || (overlap[d] == best_overlap && d < best)) {
        best = d;
        best_overlap = overlap[d];
      }
      overlap[d] = 0;
    }
    touched.clear();
    current = best;
  }
  return order;
}

}  // namespace

DocOrdering order_documents(const Corpus& corpus, OrderingStrategy strategy) {
  if (corpus.num_docs() == 0) throw std::invalid_argument("order_documents: empty corpus");
  switch (strategy) {
    case OrderingStrategy::kIdentity:
      return DocOrdering::identity(corpus.num_docs());
    case OrderingStrategy::kGreedySimilarity:
      return greedy_similarity(corpus);
  }
  throw std::invalid_argument("order_documents: unknown strategy");
}

namespace {

ForwardBlockIndex build_forward(const Corpus& corpus, const DocOrdering& ordering, const PartitionGeometry& geometry) {
  struct Triple {
    TermId term;
    std::uint16_t slot;
    Impact impact;
  };
  ForwardBlockIndex fwd;
  fwd.block_offsets.reserve(geometry.num_blocks + 1);
  fwd.block_offsets.push_back(0);
  fwd.term_offsets.push_back(0);
  std::vector<Triple> buffer;
  for (std::uint64_t block = 0; block < geometry.num_blocks; ++block) {
    buffer.clear();
    const std::uint64_t first = block * geometry.block_size;
    const std::uint32_t count = geometry.docs_in_block(block);
    for (std::uint32_t slot = 0; slot < count; ++slot) {
      for (const auto& e : corpus.docs[ordering.permutation[first + slot]].entries) {
        buffer.push_back({e.term, static_cast<std::uint16_t>(slot), e.impact});
      }
    }
    std::sort(buffer.begin(), buffer.end(), [](const Triple& a, const Triple& b) {
      return a.term != b.term ? a.term < b.term : a.slot < b.slot;
    });
    for (std::size_t i = 0; i < buffer.size(); ++i) {
      if (i > 0 && buffer[i].term != buffer[i - 1].term) fwd.term_offsets.push_back(fwd.slots.size());
      if (i == 0 || buffer[i].term != buffer[i - 1].term) fwd.terms.push_back(buffer[i].term);
      fwd.slots.push_back(buffer[i].slot);
      fwd.impacts.push_back(buffer[i].impact);
    }
    if (!buffer.empty()) fwd.term_offsets.push_back(fwd.slots.size());
    fwd.block_offsets.push_back(fwd.terms.size());
  }
  return fwd;
}

}  // namespace

BlockIndex build_index(const Corpus& corpus, const DocOrdering& ordering, std::uint32_t b, std::uint32_t c,
                       Execution exec) {
  if (corpus.num_docs() == 0) throw std::invalid_argument("build_index: empty corpus");
  if (corpus.manifest.num_docs != corpus.num_docs() || corpus.manifest.external_ids.size() != corpus.num_docs()) {
    throw std::invalid_argument("build_index: manifest does not match documents");
  }
  ordering.validate(corpus.num_docs());
  for (const auto& doc : corpus.docs) {
    doc.validate();
    if (!doc.entries.empty() && doc.entries.back().term >= corpus.vocab.size()) {
      throw std::invalid_argument("build_index: term id outside vocabulary");
    }
  }

  BlockIndex index;
  index.geometry = PartitionGeometry::make(corpus.num_docs(), b, c);
  index.manifest = corpus.manifest;
  index.manifest.vocab_size = corpus.vocab.size();
  index.vocab = corpus.vocab;
  index.ordering = ordering;
  kernels::block_maxima(exec, corpus, ordering, index.geometry, index.block_max);
  kernels::superblock_tables(exec, index.block_max, index.geometry, corpus.vocab.size(), index.superblocks);
  index.forward = build_forward(corpus, ordering, index.geometry);
  index.finalize();
  return index;
}

void BlockIndex::finalize() {
  corpus_fingerprint = sbp::corpus_fingerprint(manifest);
  const std::size_t n = manifest.num_docs;
  std::vector<DocId> by_external(n);
  std::iota(by_external.begin(), by_external.end(), DocId{0});
  std::sort(by_external.begin(), by_external.end(),
            [&](DocId a, DocId b) { return manifest.external_ids[a] < manifest.external_ids[b]; });
  std::vector<std::uint32_t> rank_of_doc(n);
  for (std::size_t r = 0; r < n; ++r) rank_of_doc[by_external[r]] = static_cast<std::uint32_t>(r);

  tie_rank.assign(geometry.num_blocks * geometry.block_size, kNoRank);
  for (std::size_t pos = 0; pos < n; ++pos) tie_rank[pos] = rank_of_doc[ordering.permutation[pos]];

  block_min_rank.assign(geometry.num_blocks, kNoRank);
  for (std::uint64_t blk = 0; blk < geometry.num_blocks; ++blk) {
    const auto first = tie_rank.begin() + static_cast<std::ptrdiff_t>(blk * geometry.block_size);
    block_min_rank[blk] = *std::min_element(first, first + geometry.block_size);
  }
  superblock_min_rank.assign(geometry.num_superblocks, kNoRank);
  for (std::uint64_t x = 0; x < geometry.num_superblocks; ++x) {
    const auto first = block_min_rank.begin() + static_cast<std::ptrdiff_t>(geometry.first_block(x));
    superblock_min_rank[x] = *std::min_element(first, first + geometry.child_count(x));
  }
}

Corpus reconstruct_corpus(const BlockIndex& index) {
  Corpus corpus;
  corpus.manifest = index.manifest;
  corpus.vocab = index.vocab;
  corpus.docs.resize(index.manifest.num_docs);
  const auto& fwd = index.forward;
  for (std::uint64_t block = 0; block < index.geometry.num_blocks; ++block) {
    for (std::uint64_t j = fwd.block_offsets[block]; j < fwd.block_offsets[block + 1]; ++j) {
      for (std::uint64_t p = fwd.term_offsets[j]; p < fwd.term_offsets[j + 1]; ++p) {
        const std::uint64_t pos = block * index.geometry.block_size + fwd.slots[p];
        corpus.docs[index.doc_at(pos)].entries.push_back({fwd.terms[j], fwd.impacts[p]});
      }
    }
  }
  return corpus;
}

SpaceReport index_space_report(const BlockIndex& index) {
  SpaceReport r;
  r.superblock_table_bytes = index.superblocks.max_weight.size() * sizeof(Impact) +
                             index.superblocks.child_sum.size() * sizeof(std::uint16_t);
  r.block_table_bytes = index.block_max.values.size() * sizeof(Impact);
  const auto& f = index.forward;
  r.forward_bytes = f.block_offsets.size() * sizeof(std::uint64_t) + f.terms.size() * sizeof(TermId) +
                    f.term_offsets.size() * sizeof(std::uint64_t) + f.slots.size() * sizeof(std::uint16_t) +
                    f.impacts.size() * sizeof(Impact);
  return r;
}

}  // namespace sbp
