#include "gridstor/controller.hpp"

#include <algorithm>
#include <stdexcept>

namespace gridstor {

ParamResult ParamRouter::set(const std::string& key, double value) {
  if (policy_->has_parameter(key)) {
    return policy_->set_parameter(key, value);
  }
  return storage_->set_parameter(key, value);
}

std::optional<double> ParamRouter::get(const std::string& key) const {
  if (policy_->has_parameter(key)) {
    return policy_->get_parameter(key);
  }
  return storage_->get_parameter(key);
}

bool ParamRouter::knows(const std::string& key) const {
  return policy_->has_parameter(key) || storage_->get_parameter(key).has_value();
}

ScheduleController::ScheduleController(std::string name, std::vector<ScheduleEvent> events)
    : name_(std::move(name)), events_(std::move(events)) {
  for (const ScheduleEvent& ev : events_) {
    if (ev.start >= ev.end) {
      throw std::invalid_argument("ScheduleController: event window must have start < end");
    }
    if (ev.key.empty()) {
      throw std::invalid_argument("ScheduleController: event key must not be empty");
    }
  }
  // Reject overlapping windows per key.
  std::vector<const ScheduleEvent*> sorted;
  sorted.reserve(events_.size());
  for (const ScheduleEvent& ev : events_) sorted.push_back(&ev);
  std::sort(sorted.begin(), sorted.end(), [](const ScheduleEvent* a, const ScheduleEvent* b) {
    return a->key != b->key ? a->key < b->key : a->start < b->start;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->key == sorted[i - 1]->key && sorted[i]->start < sorted[i - 1]->end) {
      throw std::invalid_argument("ScheduleController: overlapping windows for key '" +
                                  sorted[i]->key + "'");
    }
  }
  states_.resize(events_.size());
}

void ScheduleController::on_step(std::int64_t now, double /*last_e_grid_wh*/,
                                 const StorageState& /*last_state*/, ParamRouter& params) {
  // Deactivations first so that back-to-back windows on one key hand over
  // cleanly within a single step.
  for (std::size_t i = 0; i < events_.size(); ++i) {
    EventState& st = states_[i];
    if (st.active && now >= events_[i].end) {
      const ParamResult r = params.set(events_[i].key, st.prior);
      if (!r.ok) {
        throw std::runtime_error("ScheduleController: failed to restore '" +
                                 events_[i].key + "': " + r.error);
      }
      st.active = false;
      st.done = true;
    }
  }
  for (std::size_t i = 0; i < events_.size(); ++i) {
    EventState& st = states_[i];
    if (!st.active && !st.done && now >= events_[i].start && now < events_[i].end) {
      const std::optional<double> prior = params.get(events_[i].key);
      if (!prior) {
        throw std::runtime_error("ScheduleController: unknown parameter '" +
                                 events_[i].key + "'");
      }
      st.prior = *prior;
      const ParamResult r = params.set(events_[i].key, events_[i].value);
      if (!r.ok) {
        throw std::runtime_error("ScheduleController: failed to set '" + events_[i].key +
                                 "': " + r.error);
      }
      st.active = true;
    }
  }
}

}  // namespace gridstor
