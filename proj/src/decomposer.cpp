#include "lpq/decomposer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpq {

namespace {

constexpr double kTol = 1e-12;

std::uint64_t shifted_index(std::uint64_t n, double C) {
    return static_cast<std::uint64_t>(std::floor(static_cast<double>(n - 1) / C)) + 1;
}

std::uint64_t effective_horizon(const Seq& x, const Seq& y, std::uint64_t horizon) {
    std::uint64_t h = horizon;
    if (x.is_finite()) h = std::max<std::uint64_t>(h, x.support_size());
    if (y.is_finite()) h = std::max<std::uint64_t>(h, y.support_size());
    return h;
}

}  // namespace

MajorizeReport head_majorizes(const Seq& x, const Seq& y, double p, std::uint64_t horizon) {
    if (!(p > 0)) throw std::invalid_argument("head_majorizes: p > 0");
    MajorizeReport rep;
    rep.verdict = Verdict::Pass;
    rep.min_margin = std::numeric_limits<double>::infinity();
    std::uint64_t h = effective_horizon(x, y, horizon);
    double hx = 0.0, hy = 0.0;
    for (std::uint64_t n = 1; n <= h; ++n) {
        hx += std::pow(x.at(n), p);
        hy += std::pow(y.at(n), p);
        double margin = hx - hy;
        if (margin < rep.min_margin) rep.min_margin = margin;
        if (margin < -kTol) {
            rep.verdict = Verdict::Fail;
            rep.first_violation = n;
            return rep;
        }
    }
    if (!(x.is_finite() && y.is_finite()))
        rep.verdict = worst(rep.verdict, tail_pointwise_dominated(x, y, h));
    return rep;
}

MajorizeReport tail_majorizes_shifted(const Seq& x, const Seq& y, double q, double C,
                                      std::uint64_t horizon) {
    if (!(q >= 1.0)) throw std::invalid_argument("tail_majorizes_shifted: q >= 1");
    if (!(C >= 1.0)) throw std::invalid_argument("tail_majorizes_shifted: C >= 1");
    MajorizeReport rep;
    rep.verdict = Verdict::Pass;
    rep.min_margin = std::numeric_limits<double>::infinity();
    std::uint64_t h = effective_horizon(x, y, horizon);
    for (std::uint64_t n = 1; n <= h; ++n) {
        CertifiedValue lhs = tail_sum(y, n, q);
        CertifiedValue rhs = tail_sum(x, shifted_index(n, C), q).scaled(C);
        rep.min_margin = std::min(rep.min_margin, rhs.lo - lhs.hi);
        Verdict v = certified_le(lhs, rhs, kTol);
        if (v != Verdict::Pass) {
            rep.verdict = v;
            rep.first_violation = n;
            return rep;
        }
    }
    // Past h the unshifted comparison suffices: the shift only enlarges rhs.
    if (!(x.is_finite() && y.is_finite()))
        rep.verdict = worst(rep.verdict, tail_pointwise_dominated(x, y, h));
    return rep;
}

MajorizeReport holmstedt_majorizes(const Seq& x, const Seq& y, const CoupleParams& couple,
                                   std::uint64_t horizon) {
    if (!(couple.p > 0) || couple.q_is_inf())
        throw std::invalid_argument("holmstedt_majorizes: 0 < p < q < inf required");
    MajorizeReport rep;
    rep.verdict = Verdict::Pass;
    rep.min_margin = std::numeric_limits<double>::infinity();
    std::uint64_t h = effective_horizon(x, y, horizon);
    for (std::uint64_t n = 1; n <= h; ++n) {
        double w = std::pow(static_cast<double>(n), 1.0 / couple.alpha);
        CertifiedValue lhs = Pp(y, n, couple.p) + Qq(y, n, couple.q).scaled(w);
        CertifiedValue rhs = Pp(x, n, couple.p) + Qq(x, n, couple.q).scaled(w);
        rep.min_margin = std::min(rep.min_margin, rhs.lo - lhs.hi);
        Verdict v = certified_le(lhs, rhs, 1e-9);
        if (v != Verdict::Pass) {
            rep.verdict = v;
            rep.first_violation = n;
            return rep;
        }
    }
    if (!(x.is_finite() && y.is_finite()))
        rep.verdict = worst(rep.verdict, tail_pointwise_dominated(x, y, h));
    return rep;
}

IntervalPartition ab_partition(const Seq& x, const Seq& y, const CoupleParams& couple,
                               std::uint64_t horizon) {
    if (!(couple.p > 0) || couple.q_is_inf())
        throw std::invalid_argument("ab_partition: 0 < p < q < inf required");
    IntervalPartition part;
    part.horizon = horizon;
    part.coverage = Verdict::Pass;

    // state: 1 = certified in, 0 = certified out, -1 = undecided
    std::vector<int> in_a(horizon + 1, 0), in_b(horizon + 1, 0);
    double a_run = 0.0;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        a_run += std::pow(x.at(n), couple.p) - std::pow(y.at(n), couple.p);
        in_a[n] = a_run >= -kTol ? 1 : 0;
        CertifiedValue b = tail_sum(x, n, couple.q) - tail_sum(y, n, couple.q);
        in_b[n] = b.lo >= -kTol ? 1 : (b.hi < -kTol ? 0 : -1);
    }
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        if (in_a[n] == 1 || in_b[n] == 1) continue;
        if (in_a[n] == 0 && in_b[n] == 0) {
            part.coverage = Verdict::Fail;
            part.uncovered_index = n;
            break;
        }
        part.coverage = Verdict::Undecided;
        part.uncovered_index = n;
        break;
    }
    auto collect = [&](const std::vector<int>& state, std::vector<IntervalBlock>& blocks) {
        std::uint64_t n = 1;
        while (n <= horizon) {
            if (state[n] != 1) {
                ++n;
                continue;
            }
            IntervalBlock blk{n, n, false};
            while (blk.last < horizon && state[blk.last + 1] == 1) ++blk.last;
            blk.open_ended = (blk.last == horizon);
            blocks.push_back(blk);
            n = blk.last + 1;
        }
    };
    collect(in_a, part.a_blocks);
    collect(in_b, part.b_blocks);
    return part;
}

std::vector<BlockCertificate> block_certificates(const Seq& x, const Seq& y,
                                                 const IntervalPartition& partition,
                                                 const CoupleParams& couple) {
    std::vector<BlockCertificate> certs;
    for (const auto& blk : partition.a_blocks) {
        BlockCertificate c;
        c.block = blk;
        c.kind = BlockCertificate::Kind::Head;
        c.verdict = Verdict::Pass;
        c.margin = std::numeric_limits<double>::infinity();
        double run = 0.0;
        for (std::uint64_t L = blk.first; L <= blk.last; ++L) {
            run += std::pow(x.at(L), couple.p) - std::pow(y.at(L), couple.p);
            if (run < c.margin) c.margin = run;
            if (run < -kTol && c.verdict == Verdict::Pass) {
                c.verdict = Verdict::Fail;
                c.failure_index = L;
            }
        }
        certs.push_back(c);
    }
    for (const auto& blk : partition.b_blocks) {
        BlockCertificate c;
        c.block = blk;
        c.kind = BlockCertificate::Kind::Tail;
        c.verdict = Verdict::Pass;
        c.margin = std::numeric_limits<double>::infinity();
        CertifiedValue beyond = CertifiedValue::exact(0.0);
        if (blk.open_ended)
            beyond = tail_sum(x, blk.last + 1, couple.q) - tail_sum(y, blk.last + 1, couple.q);
        CertifiedValue run = beyond;
        for (std::uint64_t L = blk.last; L >= blk.first; --L) {
            run = run + CertifiedValue::exact(std::pow(x.at(L), couple.q) -
                                              std::pow(y.at(L), couple.q));
            if (run.lo < c.margin) c.margin = run.lo;
            if (c.verdict == Verdict::Pass) {
                Verdict v = run.lo >= -kTol ? Verdict::Pass
                                            : (run.hi < -kTol ? Verdict::Fail : Verdict::Undecided);
                if (v != Verdict::Pass) {
                    c.verdict = v;
                    c.failure_index = L;
                }
            }
            if (L == blk.first) break;
        }
        certs.push_back(c);
    }
    return certs;
}

namespace {

// Shared greedy transport: serve demands d_k = y_k^e by consuming supplies
// s_j = x_j^e in index order; the coefficient (w/d_k)*(y_k/x_j) reproduces
// y_k exactly because the shares w sum to d_k.
OperatorMatrix transport_block(const Seq& x, const Seq& y, double e, const IntervalBlock& block,
                               bool right_to_left) {
    std::vector<std::uint64_t> order;
    for (std::uint64_t k = block.first; k <= block.last; ++k) order.push_back(k);
    if (right_to_left) std::reverse(order.begin(), order.end());

    std::size_t dim = block.last;  // 0-based matrix over 1..last
    std::vector<Triplet> tr;
    std::size_t ji = 0;  // position in `order` of the current supply
    double avail = std::pow(x.at(order[0]), e);
    double supply_total = 0.0, demand_total = 0.0;
    for (auto k : order) {
        supply_total += std::pow(x.at(k), e);
        demand_total += std::pow(y.at(k), e);
    }
    if (demand_total > supply_total * (1.0 + 1e-9) + kTol)
        throw std::runtime_error("transport_block: demand exceeds supply (certificate violated)");

    for (auto k : order) {
        double d = std::pow(y.at(k), e);
        if (d <= 0.0) continue;
        double need = d;
        while (need > 0.0) {
            if (avail <= 0.0 && ji + 1 < order.size()) {
                ++ji;
                avail = std::pow(x.at(order[ji]), e);
                continue;
            }
            bool last_supply = (ji + 1 == order.size());
            double take = last_supply ? need : std::min(avail, need);
            if (take > 0.0 && x.at(order[ji]) > 0.0) {
                double coeff = (take / d) * (y.at(k) / x.at(order[ji]));
                tr.push_back({static_cast<std::size_t>(k - 1),
                              static_cast<std::size_t>(order[ji] - 1), coeff});
            } else if (last_supply) {
                throw std::runtime_error("transport_block: ran out of positive supply");
            }
            avail -= take;
            need -= take;
            if (last_supply) break;
        }
    }
    return OperatorMatrix::from_triplets(dim, dim, tr);
}

}  // namespace

OperatorMatrix build_head_transfer(const Seq& x, const Seq& y, double p,
                                   const IntervalBlock& block) {
    if (!(p > 0)) throw std::invalid_argument("build_head_transfer: p > 0");
    return transport_block(x, y, p, block, /*right_to_left=*/false);
}

OperatorMatrix build_tail_transfer(const Seq& x, const Seq& y, double q, double C,
                                   const IntervalBlock& block) {
    if (!(q >= 1.0)) throw std::invalid_argument("build_tail_transfer: q >= 1");
    if (!(C >= 1.0)) throw std::invalid_argument("build_tail_transfer: C >= 1");
    return transport_block(x, y, q, block, /*right_to_left=*/true);
}

SplitResult split_operator(const Seq& x, const Seq& y, const CoupleParams& couple,
                           std::uint64_t horizon) {
    if (!(couple.q >= 1.0)) throw std::invalid_argument("split_operator: q >= 1 required");
    MajorizeReport hyp = holmstedt_majorizes(x, y, couple, horizon);
    if (hyp.verdict != Verdict::Pass)
        throw std::invalid_argument("split_operator: hypothesis not certified at n = " +
                                    std::to_string(hyp.first_violation));
    SplitResult res;
    res.partition = ab_partition(x, y, couple, horizon);
    if (res.partition.coverage != Verdict::Pass)
        throw std::runtime_error("split_operator: A u B does not cover index " +
                                 std::to_string(res.partition.uncovered_index));
    auto certs = block_certificates(x, y, res.partition, couple);
    for (const auto& c : certs)
        if (c.verdict != Verdict::Pass)
            throw std::runtime_error("split_operator: block certificate failed at index " +
                                     std::to_string(c.failure_index));

    std::size_t n = horizon;
    std::vector<Triplet> t_entries, s_entries;
    for (const auto& blk : res.partition.a_blocks) {
        OperatorMatrix Ti = build_head_transfer(x, y, couple.p, blk);
        for (const auto& e : Ti.triplets()) t_entries.push_back(e);
    }
    std::vector<bool> in_a(n, false), mask(n, false);
    for (const auto& blk : res.partition.a_blocks)
        for (std::uint64_t k = blk.first; k <= blk.last; ++k) in_a[k - 1] = true;
    for (const auto& blk : res.partition.b_blocks) {
        OperatorMatrix Si = build_tail_transfer(x, y, couple.q, 1.0, blk);
        for (const auto& e : Si.triplets()) s_entries.push_back(e);
        for (std::uint64_t k = blk.first; k <= blk.last; ++k)
            if (!in_a[k - 1]) mask[k - 1] = true;  // chi_{B \ A}
    }
    res.T = OperatorMatrix::from_triplets(n, n, t_entries);
    res.S = OperatorMatrix::from_triplets(n, n, s_entries).masked_rows(mask);

    std::vector<double> xv(n);
    for (std::uint64_t k = 1; k <= n; ++k) xv[k - 1] = x.at(k);
    std::vector<double> tx = res.T.apply(xv), sx = res.S.apply(xv);
    res.residual = 0.0;
    for (std::uint64_t k = 1; k <= n; ++k)
        res.residual = std::max(res.residual, std::fabs(y.at(k) - tx[k - 1] - sx[k - 1]));

    res.t_norm_p = norm_for_exponent(res.T, couple.p);
    res.t_norm_inf = norm_linf(res.T);
    res.s_norm_0 = norm_l0(res.S);
    res.s_norm_q = norm_for_exponent(res.S, couple.q);
    res.t_target_p = std::pow(8.0, 1.0 / couple.p);
    res.t_target_inf = std::pow(2.0, 1.0 / couple.p);
    return res;
}

OperatorMatrix orbit_op_l0_linf(const Seq& x, const Seq& y) {
    if (!x.is_finite() || !y.is_finite())
        throw std::invalid_argument("orbit_op_l0_linf: finite sequences only");
    std::size_t rows = std::max<std::size_t>(y.prefix_len(), 1);
    std::size_t cols = (rows + 1) / 2;
    std::vector<Triplet> tr;
    for (std::uint64_t k = 1; k <= rows; ++k) {
        double yk = y.at(k);
        double dx = x.at((k + 1) / 2);  // (D_2 x)_k
        if (yk == 0.0) continue;
        if (dx == 0.0)
            throw std::invalid_argument("orbit_op_l0_linf: y_k > 0 where (D_2 x)_k = 0");
        if (yk > 2.0 * dx * (1.0 + 1e-12))
            throw std::invalid_argument("orbit_op_l0_linf: hypothesis y <= 2 D_2 x violated at k = " +
                                        std::to_string(k));
        tr.push_back({static_cast<std::size_t>(k - 1),
                      static_cast<std::size_t>((k + 1) / 2 - 1), yk / dx});
    }
    return OperatorMatrix::from_triplets(rows, cols, tr);
}

SqReport sq_check(const Seq& x, const Seq& y, double q, double r, bool replay) {
    if (!x.is_finite() || !y.is_finite())
        throw std::invalid_argument("sq_check: finite sequences only");
    if (!(q > 0)) throw std::invalid_argument("sq_check: q > 0");
    SqReport rep;
    std::uint64_t len = std::max(x.prefix_len(), y.prefix_len());
    len = std::max<std::uint64_t>(len, 1);

    CertifiedValue mx = head_sum(x, len, q), my = head_sum(y, len, q);
    rep.equal_mass = certified_eq(mx, my, kTol);

    rep.head_condition = Verdict::Pass;
    double hx = 0.0, hy = 0.0;
    for (std::uint64_t m = 1; m <= len; ++m) {
        hx += std::pow(x.at(m), q);
        hy += std::pow(y.at(m), q);
        if (hx > hy + kTol) {
            rep.head_condition = Verdict::Fail;
            break;
        }
    }
    rep.lsz_tail = Verdict::Pass;
    for (std::uint64_t m = 1; m <= len; ++m) {
        Verdict v = certified_le(tail_sum(y, m, q), tail_sum(x, m, q), kTol);
        if (v != Verdict::Pass) {
            rep.lsz_tail = v;
            break;
        }
    }

    if (!replay) return rep;
    rep.replay_ran = true;

    // u = 2 D_2 x*; z = y with its top entry inflated to match u's q-mass.
    Seq u2 = dilate(x, 2);
    std::vector<double> uv(u2.prefix().size());
    for (std::size_t i = 0; i < uv.size(); ++i) uv[i] = 2.0 * u2.prefix()[i];
    rep.u = Seq(std::move(uv));

    std::uint64_t ulen = std::max<std::uint64_t>(rep.u.prefix_len(), len);
    rep.replay_hypothesis = Verdict::Pass;
    for (std::uint64_t m = 1; m <= ulen; ++m) {
        Verdict v = certified_le(tail_sum(y, m, q), tail_sum(rep.u, m, q), kTol);
        if (v != Verdict::Pass) {
            rep.replay_hypothesis = v;
            break;
        }
    }
    if (rep.replay_hypothesis != Verdict::Pass) return rep;

    double u_mass = head_sum(rep.u, std::max<std::uint64_t>(rep.u.prefix_len(), 1), q).mid();
    double y_rest = 0.0;
    for (std::uint64_t m = 2; m <= len; ++m) y_rest += std::pow(y.at(m), q);
    double z1q = u_mass - y_rest;
    if (z1q < std::pow(y.at(1), q) * (1.0 - 1e-12)) {
        rep.replay_hypothesis = Verdict::Fail;  // inflation would shrink the top entry
        return rep;
    }
    std::vector<double> zv(std::max<std::uint64_t>(y.prefix_len(), 1));
    for (std::size_t i = 0; i < zv.size(); ++i) zv[i] = y.at(i + 1);
    zv[0] = std::pow(z1q, 1.0 / q);
    rep.z = Seq(std::move(zv));

    rep.replay_head = Verdict::Pass;
    double hu = 0.0, hz = 0.0;
    std::uint64_t mlen = std::max<std::uint64_t>(rep.u.prefix_len(), rep.z.prefix_len());
    for (std::uint64_t m = 1; m <= mlen; ++m) {
        hu += std::pow(rep.u.at(m), q);
        hz += std::pow(rep.z.at(m), q);
        if (hu > hz + 1e-9 * std::max(1.0, hz)) {
            rep.replay_head = Verdict::Fail;
            break;
        }
    }

    CertifiedValue ny = std::isinf(r) ? CertifiedValue::exact(y.at(1))
                                      : pow_cert(head_sum(y, len, r), 1.0 / r);
    CertifiedValue nz = std::isinf(r) ? CertifiedValue::exact(rep.z.at(1))
                                      : pow_cert(head_sum(rep.z, len, r), 1.0 / r);
    rep.replay_norm = certified_le(ny, nz, kTol);
    return rep;
}

nlohmann::json partition_to_json(const IntervalPartition& p) {
    nlohmann::json j;
    auto blocks = [](const std::vector<IntervalBlock>& bs) {
        auto arr = nlohmann::json::array();
        for (const auto& b : bs) arr.push_back({b.first, b.last});
        return arr;
    };
    j["a_blocks"] = blocks(p.a_blocks);
    j["b_blocks"] = blocks(p.b_blocks);
    j["horizon"] = p.horizon;
    j["coverage"] = to_string(p.coverage);
    return j;
}

std::string certificates_csv(std::span<const BlockCertificate> certs) {
    std::string out = "block_start,block_end,kind,margin\n";
    char buf[128];
    for (const auto& c : certs) {
        std::snprintf(buf, sizeof(buf), "%llu,%llu,%s,%.17g\n",
                      static_cast<unsigned long long>(c.block.first),
                      static_cast<unsigned long long>(c.block.last),
                      c.kind == BlockCertificate::Kind::Head ? "head" : "tail", c.margin);
        out += buf;
    }
    return out;
}

}  // namespace lpq
