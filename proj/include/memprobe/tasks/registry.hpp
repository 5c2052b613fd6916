// Copyright 2026 The memprobe Authors.
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

#pragma once

#include "memprobe/tasks/composite.hpp"
#include "memprobe/tasks/match_compare.hpp"
#include "memprobe/tasks/recall_edit.hpp"
#include "memprobe/tasks/search.hpp"
#include "memprobe/tasks/sets_lists.hpp"
#include "memprobe/tasks/spot_diff.hpp"
#include "memprobe/tasks/stateful.hpp"

namespace memprobe {

/// Validates `params` for `task` and runs the task's generator. The case id
/// is left to the caller.
inline TestCase generate_case(Task task, const GenParams& params, const Vocabulary& vocab,
                              const Seed& seed) {
  using namespace tasks;
  validate_params(task, params);
  switch (task) {
    case Task::StringSearchWord: return gen_string_search_word(params, vocab, seed);
    case Task::StringSearchSeq: return gen_string_search_seq(params, vocab, seed);
    case Task::KeyValueSearch: return gen_key_value_search(params, vocab, seed);
    case Task::BatchSearch: return gen_batch_search(params, vocab, seed);
    case Task::SnapshotWords: return gen_snapshot(params, vocab, seed, false);
    case Task::ReplaceAll: return gen_replace_all(params, vocab, seed);
    case Task::OverwritePositions: return gen_overwrite_positions(params, vocab, seed);
    case Task::SnapshotNumbers: return gen_snapshot(params, vocab, seed, true);
    case Task::FunctionalUpdates: return gen_functional_updates(params, seed);
    case Task::ComparePositions: return gen_compare_positions(params, vocab, seed);
    case Task::FindDuplicates: return gen_find_duplicates(params, vocab, seed);
    case Task::Count: return gen_count(params, vocab, seed);
    case Task::CheckAssociation: return gen_check_association(params, vocab, seed);
    case Task::CompareTwoLists: return gen_compare_two_lists(params, vocab, seed);
    case Task::IdentifyOddGroup: return gen_identify_odd_group(params, vocab, seed);
    case Task::PatchDifference: return gen_patch_difference(params, vocab, seed);
    case Task::GroupMembership: return gen_group_membership(params, vocab, seed);
    case Task::GroupAssociation: return gen_group_association(params, vocab, seed, false);
    case Task::GroupAssociationAlternating:
      return gen_group_association(params, vocab, seed, true);
    case Task::Iterate: return gen_iterate(params, vocab, seed);
    case Task::QuantityState: return gen_quantity_state(params, seed);
    case Task::SetState: return gen_set_state(params, vocab, seed);
    case Task::DataBlocks: return gen_data_blocks(params, vocab, seed);
    case Task::TheoryOfMind: return gen_theory_of_mind(params, vocab, seed);
  }
  throw InvalidParams("unknown task");
}

}  // namespace memprobe
