#pragma once

#include <cstdint>

#include "ptcpsim/core/engine.hpp"

namespace ptcpsim {

enum class PacketKind : std::uint8_t { Data, Ack };

inline constexpr std::uint32_t kAckBytes = 40;

struct Packet {
  std::uint64_t id = 0;
  std::uint32_t flow_id = 0;
  std::uint32_t seq_no = 0;      // in MSS units
  std::uint32_t size_bytes = 0;  // data = MSS, acks = 40
  PacketKind kind = PacketKind::Data;
  SimTime sent_at = 0;  // data: emission time; acks: echo of the acked data
  std::uint32_t ack_no = 0;  // cumulative, acks only
  bool is_retransmission = false;  // echoed into the ack for Karn's rule
  std::uint8_t hop = 0;            // progress along the packet's path
};

using SimEvent = Event<Packet>;
using SimEngine = Engine<Packet>;

}  // namespace ptcpsim
