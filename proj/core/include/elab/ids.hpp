#ifndef ELAB_IDS_HPP
#define ELAB_IDS_HPP

#include <cstdint>
#include <limits>

namespace elab {

typedef std::uint32_t NodeId;
typedef std::int64_t SimTime;
typedef std::uint64_t MsgId;

constexpr NodeId NO_NODE = std::numeric_limits<NodeId>::max();
constexpr SimTime TIME_NEVER = std::numeric_limits<SimTime>::max();

} // namespace elab

#endif
