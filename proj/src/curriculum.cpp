#include "forge/curriculum.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "forge/errors.hpp"

namespace forge::curriculum {

std::size_t complexity(const PairRecord& rec) { return rec.tripleset.size(); }

std::vector<PairRecord> order_dataset(std::vector<PairRecord> records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const PairRecord& a, const PairRecord& b) {
                         return complexity(a) < complexity(b);
                     });
    return records;
}

ScheduleDescriptor make_schedule(bool curriculum, int pretrain_epochs,
                                 int finetune_patience_epochs, int beam_size,
                                 int no_shuffle_epochs) {
    if (pretrain_epochs < 0 || finetune_patience_epochs < 0 || no_shuffle_epochs < 0)
        throw DataError("epoch counts must be non-negative");
    if (beam_size < 1) throw DataError("beam size must be positive");
    ScheduleDescriptor sched;
    sched.curriculum = curriculum;
    sched.pretrain_epochs = pretrain_epochs;
    sched.finetune_patience_epochs = finetune_patience_epochs;
    sched.no_shuffle_epochs = curriculum ? no_shuffle_epochs : 0;
    sched.beam_size = beam_size;
    return sched;
}

std::string schedule_to_json(const ScheduleDescriptor& sched) {
    nlohmann::ordered_json obj{
        {"pretrain_epochs", sched.pretrain_epochs},
        {"finetune_patience_epochs", sched.finetune_patience_epochs},
        {"no_shuffle_epochs", sched.no_shuffle_epochs},
        {"curriculum", sched.curriculum},
        {"beam_size", sched.beam_size},
        {"selection_metric", sched.selection_metric},
    };
    return obj.dump(2);
}

}  // namespace forge::curriculum
