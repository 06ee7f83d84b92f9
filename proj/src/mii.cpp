#include "pforge/mii.hpp"
#include "pforge/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace pforge {

namespace {

// Run-walker over a graph with final degrees. For truncations, eventual
// degrees are exact even at the frontier; a run is pending only when one of
// its internal degree-2 vertices is missing a materialized edge.
struct MiiScan {
    const LabeledGraph& g;
    const std::map<Address, FrontierInfo>* frontier;  // null for finite graphs

    int final_degree(int i) const {
        if (frontier) {
            auto it = frontier->find(g.vertex(i));
            if (it != frontier->end()) return it->second.eventual_degree;
        }
        return g.degree(i);
    }
    bool edges_complete(int i) const {
        if (!frontier) return true;
        return frontier->count(g.vertex(i)) == 0;
    }
    ColourId pending_colour(int i) const {
        if (!frontier) return kNoColour;
        auto it = frontier->find(g.vertex(i));
        return it == frontier->end() ? kNoColour : it->second.pending;
    }

    MiiReport run() const {
        MiiReport rep;
        std::set<std::vector<Address>> seen;
        for (int u = 0; u < g.vertex_count(); ++u) {
            if (final_degree(u) == 2) continue;
            if (!edges_complete(u) && g.degree(u) < final_degree(u)) {
                // some incident runs start beyond the frontier; they are picked
                // up by the pending resolution of the certified variant
            }
            for (int w : g.neighbors(u)) walk(u, w, rep, seen);
        }
        return rep;
    }

    void walk(int u, int first, MiiReport& rep, std::set<std::vector<Address>>& seen) const {
        std::vector<int> path{u, first};
        int prev = u, cur = first;
        while (final_degree(cur) == 2) {
            if (g.degree(cur) < 2) {
                PendingRun pr;
                pr.anchor = g.vertex(u);
                pr.first_step = g.vertex(path[1]);
                pr.last_complete = g.vertex(prev);
                pr.frontier = g.vertex(cur);
                pr.length = static_cast<int>(path.size()) - 1;
                pr.pending = pending_colour(cur);
                rep.pending.push_back(pr);
                return;
            }
            int nxt = -1;
            for (int w : g.neighbors(cur))
                if (w != prev) nxt = w;
            if (nxt < 0) return;
            if (nxt == u) return;  // closed walk, not a path
            prev = cur;
            cur = nxt;
            path.push_back(cur);
            if (static_cast<int>(path.size()) > g.vertex_count()) return;  // safety
        }
        std::vector<Address> key;
        key.reserve(path.size());
        for (int i : path) key.push_back(g.vertex(i));
        std::vector<Address> rkey(key.rbegin(), key.rend());
        if (rkey < key) key.swap(rkey);
        if (!seen.insert(key).second) return;
        MiiPath mp;
        mp.a = key.front();
        mp.b = key.back();
        mp.a_next = key[1];
        mp.length = static_cast<int>(key.size()) - 1;
        rep.paths.push_back(mp);
        rep.spectrum.insert(mp.length);
    }
};

} // namespace

MiiReport mii_paths(const LabeledGraph& g) {
    MiiScan scan{g, nullptr};
    MiiReport rep = scan.run();
    rep.certified = true;
    return rep;
}

MiiReport mii_paths(const Truncation& t) {
    MiiScan scan{t.graph, &t.frontier};
    MiiReport rep = scan.run();
    rep.has_infinite_mii = !rep.pending.empty();
    return rep;
}

// Walk a pending run to its far anchor through the lazy materializer.
RunResolution resolve_run(Materializer& mat, const Address& prevIn, const Address& curIn,
                          int length_so_far, int cap) {
    RunResolution res;
    Address prev = prevIn, cur = curIn;
    int len = length_so_far;
    while (mat.eventual_degree(cur) == 2) {
        if (len > cap) {
            res.infinite = true;
            res.total_length = len;
            return res;
        }
        const std::vector<Address>& nb = mat.neighbors(cur);
        Address nxt;
        bool got = false;
        for (const Address& w : nb)
            if (w != prev) {
                nxt = w;
                got = true;
            }
        if (!got) {
            res.total_length = len;  // degenerate dead end
            res.far_end = cur;
            return res;
        }
        prev = cur;
        cur = nxt;
        ++len;
    }
    res.total_length = len;
    res.far_end = cur;
    return res;
}

namespace {

bool address_has_structural_descent(const Universe& uni, const Address& a,
                                    const std::map<BaseId, ColourId>& top_typed) {
    // A run is provably infinite when it descends through a structural colour
    // (the ray pattern re-enters itself). Check every Enter id's colour.
    for (const Step& s : a.steps) {
        if (s.kind != Step::Kind::Enter) continue;
        auto it = top_typed.find(s.id);
        ColourId c = kNoColour;
        if (it != top_typed.end()) c = it->second;
        for (const auto& [col, pat] : uni.patterns) {
            auto pt = pat.typed.find(s.id);
            if (pt != pat.typed.end()) c = pt->second;
        }
        if (c != kNoColour && uni.colour(c).structural) return true;
    }
    return false;
}

} // namespace

MiiReport certified_spectrum(std::shared_ptr<const Presentation> p, int hint,
                             const ExpandOptions& opt) {
    Materializer mat(p);
    std::vector<Address> seeds = mat.base_vertices();
    int radius = std::max(2 * std::max(hint, 4) + 4, 16);
    std::set<int> prev_spectrum;
    bool have_prev = false;
    MiiReport last;

    for (int iter = 0; iter < 8; ++iter) {
        Truncation t;
        try {
            t = truncate_with(mat, seeds, radius, opt);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::BudgetExceeded) return last;
            throw;
        }
        MiiReport rep = mii_paths(t);
        rep.has_infinite_mii = false;

        int cap = std::max({4 * radius, 8 * std::max(hint, 4), 512});
        bool unexplained_long_run = false;
        std::set<std::pair<Address, Address>> resolved;
        for (const PendingRun& pr : rep.pending) {
            RunResolution rr = resolve_run(mat, pr.last_complete, pr.frontier, pr.length, cap);
            if (rr.infinite) {
                rep.has_infinite_mii = true;
                // honest certification: an over-cap run must be a structural ray
                Address probe = pr.frontier;
                if (!address_has_structural_descent(*p->uni, probe, p->typed) &&
                    !address_has_structural_descent(*p->uni, rr.far_end, p->typed))
                    unexplained_long_run = true;
                continue;
            }
            auto key = std::minmax(pr.anchor, rr.far_end);
            if (!resolved.insert({key.first, key.second}).second) continue;
            rep.spectrum.insert(rr.total_length);
            rep.paths.push_back(MiiPath{pr.anchor, rr.far_end, pr.first_step, rr.total_length});
        }

        int sigma0 = rep.sigma0_or_zero();
        bool stable = have_prev && rep.spectrum == prev_spectrum;
        if (stable && !unexplained_long_run && radius >= 2 * (sigma0 + 2)) {
            rep.certified = true;
            rep.pending.clear();
            return rep;
        }
        prev_spectrum = rep.spectrum;
        have_prev = true;
        last = rep;
        radius *= 2;
    }
    return last;  // uncertified
}

std::optional<int> spectrally_distinguishable(const MiiReport& a, const MiiReport& b) {
    if (!a.certified || !b.certified)
        fail(ErrorKind::Uncertified, "spectral comparison needs certified spectra");
    std::set<int> diff;
    for (int k : a.spectrum)
        if (!b.spectrum.count(k)) diff.insert(k);
    for (int k : b.spectrum)
        if (!a.spectrum.count(k)) diff.insert(k);
    for (int k : diff)
        if (k >= 3) return k;
    return std::nullopt;
}

namespace {
std::vector<std::vector<Address>> full_paths(const LabeledGraph& g) {
    std::vector<std::vector<Address>> out;
    std::set<std::vector<Address>> seen;
    for (int u = 0; u < g.vertex_count(); ++u) {
        if (g.degree(u) == 2) continue;
        for (int w0 : g.neighbors(u)) {
            std::vector<int> path{u, w0};
            int prev = u, cur = w0;
            bool ok = true;
            while (g.degree(cur) == 2) {
                int nxt = -1;
                for (int w : g.neighbors(cur))
                    if (w != prev) nxt = w;
                if (nxt < 0 || nxt == u) {
                    ok = false;
                    break;
                }
                prev = cur;
                cur = nxt;
                path.push_back(cur);
                if (static_cast<int>(path.size()) > g.vertex_count() + 1) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            std::vector<Address> key;
            for (int i : path) key.push_back(g.vertex(i));
            std::vector<Address> rkey(key.rbegin(), key.rend());
            if (rkey < key) key.swap(rkey);
            if (seen.insert(key).second) out.push_back(key);
        }
    }
    return out;
}

bool is_subpath(const std::vector<Address>& small, const std::vector<Address>& big) {
    if (small.size() > big.size()) return false;
    auto contains = [&](const std::vector<Address>& b) {
        for (std::size_t i = 0; i + small.size() <= b.size(); ++i) {
            bool match = true;
            for (std::size_t j = 0; j < small.size(); ++j)
                if (b[i + j] != small[j]) {
                    match = false;
                    break;
                }
            if (match) return true;
        }
        return false;
    };
    if (contains(big)) return true;
    std::vector<Address> rev(big.rbegin(), big.rend());
    return contains(rev);
}
} // namespace

std::vector<std::vector<Address>> new_mii_after_deletion(const LabeledGraph& g, const Address& x,
                                                         const Address& y) {
    if (!g.has_edge(x, y)) fail(ErrorKind::NotAnEdge, "new_mii_after_deletion: not an edge");
    LabeledGraph h;
    for (const Address& a : g.vertices_sorted()) h.ensure_vertex(a);
    for (const auto& [a, b] : g.edges_sorted())
        if (!((a == x && b == y) || (a == y && b == x))) h.add_edge(a, b);
    auto before = full_paths(g);
    auto after = full_paths(h);
    std::vector<std::vector<Address>> fresh;
    for (const auto& pth : after) {
        bool sub = false;
        for (const auto& old : before)
            if (is_subpath(pth, old)) {
                sub = true;
                break;
            }
        if (!sub) fresh.push_back(pth);
    }
    return fresh;
}

bool check_mii_extension(const Truncation& host, const LabeledGraph& comp,
                         const std::vector<Address>& b, int k, bool proper, bool infinite_growth,
                         std::string* why) {
    auto report = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    for (const Address& v : comp.vertices_sorted())
        if (!host.graph.has_vertex(v))
            fail(ErrorKind::CoreNotInduced, "component vertex missing from host");
    for (const Address& v : comp.vertices_sorted()) {
        int hi = host.graph.index_of(v);
        for (int w : host.graph.neighbors(hi)) {
            const Address& wa = host.graph.vertex(w);
            if (comp.has_vertex(wa) && !comp.has_edge(v, wa))
                fail(ErrorKind::CoreNotInduced, "component not induced in host");
        }
    }

    std::vector<Address> attach;
    for (const Address& l : b)
        if (comp.has_vertex(l)) attach.push_back(l);

    if (proper) {
        for (const Address& l : attach) {
            int li = comp.index_of(l);
            if (comp.degree(li) != 1) return report("attachment vertex is not a leaf of comp");
            if (comp.degree(comp.neighbors(li)[0]) < 3)
                return report("attachment leaf is not proper in comp");
        }
    }

    LabeledGraph bl = ball(host.graph, comp.vertices_sorted(), k);
    std::set<Address> expected(comp.vertices_sorted().begin(), comp.vertices_sorted().end());
    std::set<Address> attach_set(attach.begin(), attach.end());

    for (const Address& v : comp.vertices_sorted()) {
        int hv = host.graph.index_of(v);
        std::vector<Address> outside;
        for (int w : host.graph.neighbors(hv)) {
            const Address& wa = host.graph.vertex(w);
            if (!comp.has_vertex(wa)) outside.push_back(wa);
        }
        if (!attach_set.count(v)) {
            if (!outside.empty()) return report("non-attachment vertex gained a neighbour");
            continue;
        }
        if (outside.size() != 2) return report("attachment vertex needs exactly two new edges");
        int leaves = 0, paths = 0;
        for (const Address& w : outside) {
            int deg = host.frontier.count(w) ? host.frontier.at(w).eventual_degree
                                             : host.graph.degree(host.graph.index_of(w));
            if (deg == 1) {
                ++leaves;
                expected.insert(w);
                continue;
            }
            Address prev = v, cur = w;
            int len = 0;
            while (true) {
                ++len;
                expected.insert(cur);
                if (len == k) break;
                if (!host.complete(cur)) return report("path not materialized to length k");
                int ci = host.graph.index_of(cur);
                if (host.graph.degree(ci) != 2) return report("path vertex has wrong degree");
                Address nxt;
                for (int q : host.graph.neighbors(ci)) {
                    const Address& qa = host.graph.vertex(q);
                    if (qa != prev) nxt = qa;
                }
                prev = cur;
                cur = nxt;
            }
            ++paths;
        }
        if (leaves != 1 || paths != 1) return report("attachment has wrong new-edge shapes");
    }

    for (const Address& v : bl.vertices_sorted())
        if (!expected.count(v)) return report("ball contains an unexpected vertex");

    if (infinite_growth) {
        std::vector<int> keep;
        for (int i = 0; i < host.graph.vertex_count(); ++i)
            if (!comp.has_vertex(host.graph.vertex(i))) keep.push_back(i);
        LabeledGraph rest = host.graph.induced(keep);
        for (const LabeledGraph& c : components(rest)) {
            bool touches = false;
            for (const Address& v : c.vertices_sorted())
                if (host.is_frontier(v)) {
                    touches = true;
                    break;
                }
            if (!touches) return report("a component of host - comp is bounded");
        }
    }
    return true;
}

} // namespace pforge
