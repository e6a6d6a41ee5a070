#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "forge/core_types.hpp"

namespace forge::curriculum {

/// Training regimen handed to the external trainer; this toolkit orders
/// data but never touches gradients.
struct ScheduleDescriptor {
    int pretrain_epochs = 10;
    int finetune_patience_epochs = 30;
    int no_shuffle_epochs = 30;
    bool curriculum = true;
    int beam_size = 5;
    std::string selection_metric = "BLEU on validation";
};

/// Sample complexity: the number of triples in the input.
std::size_t complexity(const PairRecord& rec);

/// Stable ascending sort by complexity; equal-complexity records keep
/// their input order.
std::vector<PairRecord> order_dataset(std::vector<PairRecord> records);

/// Builds the descriptor; with curriculum off, no_shuffle_epochs is 0.
ScheduleDescriptor make_schedule(bool curriculum, int pretrain_epochs = 10,
                                 int finetune_patience_epochs = 30, int beam_size = 5,
                                 int no_shuffle_epochs = 30);

std::string schedule_to_json(const ScheduleDescriptor& sched);

}  // namespace forge::curriculum
