// enumerate.hpp -- output-linear-delay enumeration over shift-ECS nodes
//
// Follows the two-routine scheme of cursor traversal (walk the left spine
// collecting union branch points and one terminal) and move (retarget the
// deepest exhausted branch point to its right child). Products hold one
// cursor per factor; set-of-sets leaves hold a nested session over the
// marker store. Delay is measured in elementary steps (node visits, stack
// moves, token emissions) and stays linear in the emitted output size.
#pragma once

#include <cassert>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gcq/ecs.hpp"

namespace gcq {

class EnumSession {
  public:
    EnumSession(const EcsArena& arena, NodeId root, const EcsArena* sers = nullptr)
        : a_(arena), sers_(sers), root_(root) {}

    // Next annotation, or nullopt once the set is exhausted. Tokens arrive
    // in position order because products are position-disjoint.
    std::optional<Annotation> next() {
        steps_ = 0;
        buf_.clear();
        if (!started_) {
            started_ = true;
            if (root_ == EcsArena::kBot) {
                more_ = false;
                last_steps_ = ++steps_;
                return std::nullopt;
            }
            cur_ = std::make_unique<Cursor>(*this, root_, 0);
            more_ = cur_->first();
            last_steps_ = steps_;
            return std::move(buf_);
        }
        if (!more_) {
            last_steps_ = ++steps_;
            return std::nullopt;
        }
        more_ = cur_->next();
        last_steps_ = steps_;
        return std::move(buf_);
    }

    // Whether another next() will yield (false before exhaustion is only
    // reported after the last yield, as the traversal tracks it for free).
    bool has_more() const { return started_ ? more_ : root_ != EcsArena::kBot; }

    // Elementary steps spent producing the most recent yield.
    uint64_t last_delay_steps() const { return last_steps_; }

  private:
    struct Cursor {
        EnumSession& s;
        struct Entry {
            NodeId node;
            int64_t acc;
        };
        std::vector<Entry> st;  // union branch points, then the terminal
        int64_t base;
        // Terminal state:
        bool tmore = false;
        std::unique_ptr<Cursor> lc, rc;  // product factors
        bool lmore = false, rmore = false;
        std::unique_ptr<EnumSession> sub;  // nested set-of-sets session
        std::string cur_set;

        Cursor(EnumSession& s_, NodeId v, int64_t base_) : s(s_), base(base_) {
            s.steps_++;
            trav(v, 0);
        }

        void trav(NodeId v, int64_t acc) {
            for (;;) {
                s.steps_++;
                switch (s.a_.kind(v)) {
                    case NodeKind::Shift:
                        acc = checked_add(acc, s.a_.shift_of(v));
                        v = s.a_.left(v);
                        break;
                    case NodeKind::Union:
                        st.push_back({v, acc});
                        v = s.a_.left(v);
                        break;
                    case NodeKind::Bot:
                        assert(false && "bottom below an enumerated root");
                        [[fallthrough]];
                    default:
                        st.push_back({v, acc});
                        return;
                }
            }
        }

        bool spine_left() const { return st.size() > 1; }

        bool first() {
            term_first();
            return tmore || spine_left();
        }

        bool next() {
            if (tmore) {
                term_next();
            } else {
                move();
                term_first();
            }
            return tmore || spine_left();
        }

        void curr() { term_curr(); }

        void move() {
            s.steps_++;
            st.pop_back();  // exhausted terminal
            Entry u = st.back();
            st.pop_back();  // deepest branch point
            trav(s.a_.right(u.node), u.acc);
        }

        void term_first() {
            s.steps_++;
            Entry t = st.back();
            switch (s.a_.kind(t.node)) {
                case NodeKind::Output:
                    s.emit(s.a_.output_name(s.a_.sym_of(t.node)), pos(t));
                    tmore = false;
                    break;
                case NodeKind::Eps: tmore = false; break;
                case NodeKind::SersOutput: {
                    assert(s.sers_ && "set-of-sets leaf without a nested store");
                    sub = std::make_unique<EnumSession>(*s.sers_, s.a_.rep_of(t.node));
                    auto seq = sub->next();
                    s.steps_ += sub->last_delay_steps();
                    assert(seq && "empty set-of-sets leaf");
                    cur_set = sers_set_symbol(*seq);
                    s.emit(cur_set, pos(t));
                    tmore = sub->has_more();
                    break;
                }
                case NodeKind::Product: {
                    NodeId l = s.a_.left(t.node), r = s.a_.right(t.node);
                    lc = std::make_unique<Cursor>(s, l, base + t.acc);
                    lmore = lc->first();
                    rc = std::make_unique<Cursor>(s, r, base + t.acc);
                    rmore = rc->first();
                    tmore = lmore || rmore;
                    break;
                }
                default: assert(false && "bad terminal kind"); break;
            }
        }

        void term_next() {
            s.steps_++;
            Entry t = st.back();
            switch (s.a_.kind(t.node)) {
                case NodeKind::SersOutput: {
                    auto seq = sub->next();
                    s.steps_ += sub->last_delay_steps();
                    cur_set = sers_set_symbol(*seq);
                    s.emit(cur_set, pos(t));
                    tmore = sub->has_more();
                    break;
                }
                case NodeKind::Product: {
                    if (rmore) {
                        lc->curr();
                        rmore = rc->next();
                    } else {
                        lmore = lc->next();
                        rc = std::make_unique<Cursor>(s, s.a_.right(t.node),
                                                      base + t.acc);
                        rmore = rc->first();
                    }
                    tmore = lmore || rmore;
                    break;
                }
                default: assert(false && "terminal cannot advance"); break;
            }
        }

        void term_curr() {
            s.steps_++;
            Entry t = st.back();
            switch (s.a_.kind(t.node)) {
                case NodeKind::Output:
                    s.emit(s.a_.output_name(s.a_.sym_of(t.node)), pos(t));
                    break;
                case NodeKind::Eps: break;
                case NodeKind::SersOutput: s.emit(cur_set, pos(t)); break;
                case NodeKind::Product:
                    lc->curr();
                    rc->curr();
                    break;
                default: assert(false); break;
            }
        }

        int64_t pos(const Entry& t) const {
            return checked_add(checked_add(base, t.acc), 1);
        }
    };

    void emit(const std::string& sym, int64_t p) {
        steps_++;
        buf_.push_back({sym, p});
    }

    const EcsArena& a_;
    const EcsArena* sers_;
    NodeId root_;
    std::unique_ptr<Cursor> cur_;
    bool started_ = false, more_ = false;
    uint64_t steps_ = 0, last_steps_ = 0;
    Annotation buf_;
};

// Convenience: drain a session into an ordered list, optionally recording
// the worst delay-to-output ratio numerator (max steps for one yield).
inline std::vector<Annotation> enumerate_all(const EcsArena& arena, NodeId root,
                                             const EcsArena* sers = nullptr,
                                             uint64_t limit = uint64_t{1} << 22,
                                             uint64_t* max_delay = nullptr) {
    EnumSession s(arena, root, sers);
    std::vector<Annotation> out;
    while (auto ann = s.next()) {
        if (max_delay && s.last_delay_steps() > *max_delay)
            *max_delay = s.last_delay_steps();
        out.push_back(std::move(*ann));
        if (out.size() > limit) fail("LimitExceeded", "enumeration yield limit reached");
    }
    if (max_delay && s.last_delay_steps() > *max_delay)
        *max_delay = s.last_delay_steps();
    return out;
}

}  // namespace gcq
