#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace ptcpsim {

// Simulated time in seconds. Real-valued; all rates are converted to
// bits/s and seconds once at configuration time.
using SimTime = double;

enum class EventKind : std::uint8_t {
  PacketArrival,      // packet finished crossing a link
  PacketDeparture,    // packet finished serializing out of a queue
  AckArrival,         // ack finished crossing a link
  RtoExpiry,          // retransmission timer
  FlowStart,          // flow establishment
  SampleTick,         // statistics sampling
  BackgroundArrival,  // background source emission
};

using EventHandle = std::uint64_t;

template <typename Payload>
struct Event {
  SimTime fire_at = 0;
  EventHandle seq = 0;  // global insertion counter, unique per engine
  EventKind kind = EventKind::PacketArrival;
  std::uint32_t target = 0;  // opaque handle: flow, link or queue id
  Payload payload{};
};

// Deterministic single-threaded discrete-event engine. Events fire in
// (fire_at, seq) order; the insertion counter breaks ties so replays are
// bit-exact regardless of platform. Engine instances are independent and
// may run concurrently in separate scenarios.
template <typename Payload>
class Engine {
 public:
  using EventType = Event<Payload>;
  using Dispatcher = std::function<void(const EventType&)>;

  SimTime now() const { return now_; }

  void set_dispatcher(Dispatcher d) { dispatch_ = std::move(d); }

  EventHandle schedule(EventKind kind, SimTime fire_at, std::uint32_t target,
                       Payload payload = Payload{}) {
    if (fire_at < now_) {
      std::ostringstream msg;
      msg << "schedule in the past: fire_at=" << fire_at << " now=" << now_;
      throw std::logic_error(msg.str());
    }
    EventHandle handle = next_seq_++;
    heap_.push_back(EventType{fire_at, handle, kind, target, payload});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
    pending_.insert(handle);
    return handle;
  }

  // True if the event had not yet fired and will never fire. Unknown or
  // already-fired handles return false.
  bool cancel(EventHandle handle) { return pending_.erase(handle) == 1; }

  // Processes every non-cancelled event with fire_at <= t_end in order and
  // advances the clock to t_end. Returns the number of events processed.
  std::uint64_t run_until(SimTime t_end) {
    if (t_end < now_) {
      std::ostringstream msg;
      msg << "run_until into the past: t_end=" << t_end << " now=" << now_;
      throw std::logic_error(msg.str());
    }
    std::uint64_t processed = 0;
    while (!heap_.empty() && heap_.front().fire_at <= t_end) {
      std::pop_heap(heap_.begin(), heap_.end(), Later{});
      EventType ev = heap_.back();
      heap_.pop_back();
      if (pending_.erase(ev.seq) == 0) continue;  // cancelled
      now_ = ev.fire_at;
      dispatch_(ev);
      ++processed;
    }
    now_ = t_end;
    return processed;
  }

  std::size_t pending_events() const { return pending_.size(); }

 private:
  struct Later {
    bool operator()(const EventType& a, const EventType& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  SimTime now_ = 0;
  EventHandle next_seq_ = 0;
  std::vector<EventType> heap_;
  std::unordered_set<EventHandle> pending_;
  Dispatcher dispatch_;
};

}  // namespace ptcpsim
