#pragma once

#include <string>
#include <vector>

namespace macrsv {

// One line per event: frame,phase,index,node,action,detail
// phase: admit|rts|cts|conf|rb|data|ack|reset  index: triple or slot number
// action: arrive|drop|tx|col|mark|defer|acked|deliver|reset
struct TraceRecord {
    long frame;
    std::string phase;
    int index;
    int node;
    std::string action;
    std::string detail;

    std::string to_line() const {
        return std::to_string(frame) + ',' + phase + ',' + std::to_string(index) + ',' +
               std::to_string(node) + ',' + action + ',' + detail;
    }
};

class TraceSink {
  public:
    explicit TraceSink(bool enabled = false) : enabled_(enabled) {}

    void emit(long frame, const std::string& phase, int index, int node,
              const std::string& action, const std::string& detail) {
        if (!enabled_) return;
        records_.push_back({frame, phase, index, node, action, detail});
    }

    bool enabled() const { return enabled_; }
    const std::vector<TraceRecord>& records() const { return records_; }

    std::string to_text() const {
        std::string out = "frame,phase,index,node,action,detail\n";
        for (const auto& r : records_) {
            out += r.to_line();
            out += '\n';
        }
        return out;
    }

  private:
    bool enabled_;
    std::vector<TraceRecord> records_;
};

}  // namespace macrsv
