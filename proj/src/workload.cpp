#include "nocsched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nocsched {

const std::vector<VfLevel>& default_vf_levels() {
    static const std::vector<VfLevel> levels = {
        {0.9, 2.7}, {1.0, 3.0}, {1.1, 3.3}, {1.2, 3.6}};
    return levels;
}

namespace {

// 29 synthetic task types, base times drawn log-uniformly from [0.2 s, 2.5 s]
// once and frozen here (and in data/task_types.txt).
const std::vector<TaskType> kBuiltinTable = {
    {1, 1, 2.1507, 0.29},  {1, 2, 0.4034, 0.29},  {2, 1, 0.3970, 0.29},
    {2, 2, 1.2676, 0.29},  {3, 1, 0.8119, 0.29},  {3, 2, 2.2997, 0.29},
    {4, 1, 0.3592, 0.29},  {4, 2, 0.2123, 0.29},  {5, 1, 0.2261, 0.29},
    {5, 2, 0.3453, 0.29},  {6, 1, 0.7696, 0.29},  {6, 2, 1.7202, 0.29},
    {7, 1, 0.7855, 0.29},  {7, 2, 2.3744, 0.29},  {8, 1, 0.3572, 0.29},
    {8, 2, 0.8557, 0.29},  {9, 1, 2.2728, 0.29},  {9, 2, 0.2157, 0.29},
    {10, 1, 0.6928, 0.29}, {10, 2, 0.7737, 0.29}, {11, 1, 2.0139, 0.29},
    {11, 2, 1.9406, 0.29}, {12, 1, 0.2317, 0.29}, {12, 2, 0.2642, 0.29},
    {13, 1, 1.1600, 0.29}, {13, 2, 0.2606, 0.29}, {14, 1, 0.4845, 0.29},
    {14, 2, 0.2507, 0.29}, {14, 3, 0.4811, 0.29}};

}  // namespace

TaskTypeTable::TaskTypeTable(std::vector<TaskType> entries)
    : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("empty task type table");
    aggregate_rate_ = 0.0;
    cum_.reserve(entries_.size());
    for (const auto& e : entries_) {
        if (e.base_time_s <= 0.0)
            throw std::invalid_argument("task base time must be positive");
        if (e.arrival_rate <= 0.0)
            throw std::invalid_argument("task arrival rate must be positive");
        aggregate_rate_ += e.arrival_rate;
        cum_.push_back(aggregate_rate_);
    }
}

TaskTypeTable TaskTypeTable::builtin() { return TaskTypeTable(kBuiltinTable); }

TaskTypeTable TaskTypeTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open task table: " + path);
    std::vector<TaskType> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        TaskType t{};
        if (!(ls >> t.type >> t.subtype >> t.base_time_s >> t.arrival_rate))
            throw std::runtime_error("malformed task table line: " + line);
        entries.push_back(t);
    }
    return TaskTypeTable(std::move(entries));
}

void TaskTypeTable::save(const std::string& path) const {
    std::ofstream out(path);
    out << "# type subtype base_time_s arrival_rate\n";
    for (const auto& e : entries_)
        out << e.type << ' ' << e.subtype << ' ' << e.base_time_s << ' '
            << e.arrival_rate << '\n';
}

double TaskTypeTable::mean_base_time() const {
    double sum = std::accumulate(entries_.begin(), entries_.end(), 0.0,
                                 [](double a, const TaskType& t) { return a + t.base_time_s; });
    return sum / static_cast<double>(entries_.size());
}

double TaskTypeTable::exec_time(int entry_index, const VfLevel& level,
                                const std::vector<VfLevel>& levels) const {
    double f_max = 0.0;
    for (const auto& l : levels) f_max = std::max(f_max, l.ghz);
    const auto it = std::find_if(levels.begin(), levels.end(), [&](const VfLevel& l) {
        return l.ghz == level.ghz && l.volts == level.volts;
    });
    if (it == levels.end())
        throw std::invalid_argument("exec_time: unknown V-F level");
    return entries_.at(entry_index).base_time_s * (f_max / level.ghz);
}

int TaskTypeTable::sample_type(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, aggregate_rate_);
    const double v = u(rng);
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), v);
    return static_cast<int>(std::min<size_t>(it - cum_.begin(), cum_.size() - 1));
}

ArrivalSample next_arrival(const TaskTypeTable& table, Rng& rng) {
    if (table.aggregate_rate() <= 0.0)
        throw std::invalid_argument("next_arrival: rate must be positive");
    std::exponential_distribution<double> exp(table.aggregate_rate());
    ArrivalSample s;
    s.interarrival_s = exp(rng);
    s.type_index = table.sample_type(rng);
    return s;
}

std::optional<Pairing> try_pair(int new_task_core,
                                const std::vector<PairCandidate>& candidates,
                                const Mesh& mesh, Rng& rng, double p_pair,
                                double xi) {
    if (candidates.empty()) return std::nullopt;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (u01(rng) >= p_pair) return std::nullopt;
    std::uniform_int_distribution<size_t> pick(0, candidates.size() - 1);
    const PairCandidate& partner = candidates[pick(rng)];
    std::exponential_distribution<double> dur(xi);
    Pairing p;
    p.partner = partner.task_id;
    p.duration_s = dur(rng);
    p.injection_rate = u01(rng);
    p.route = xy_route(mesh, new_task_core, partner.core);
    return p;
}

double total_service_time(double exec_s, const std::optional<Pairing>& pairing) {
    return exec_s + (pairing ? pairing->duration_s : 0.0);
}

}  // namespace nocsched
