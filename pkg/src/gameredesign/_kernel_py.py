"""Pure-Python round loop; the reference the compiled kernel must match bit for bit."""

from __future__ import annotations

import math

BACKEND = "python"


def run_chunk(
    table,
    dest,
    original,
    on_target,
    blend,
    thresholded,
    exponent,
    discrete,
    lo,
    hi,
    counts,
    strides,
    gamma,
    beta,
    eta_lr,
    logw,
    cum_probs,
    cf_sums,
    realized,
    profile_counts,
    cum_cost,
    cost_eta,
    cost_p,
    t0,
    renorm_every,
    u_play,
    u_design,
    out_actions,
    out_cost,
    record_rows,
    out_rows,
):
    n = u_play.shape[0]
    m = len(counts)
    counts_l = [int(k) for k in counts]
    strides_l = [int(x) for x in strides]
    tab = table.tolist()
    dst = dest.tolist()
    orig = original.tolist()
    on = on_target.tolist()
    lw = [row[: counts_l[i]] for i, row in enumerate(logw.tolist())]
    cp = [row[: counts_l[i]] for i, row in enumerate(cum_probs.tolist())]
    cf = [row[: counts_l[i]] for i, row in enumerate(cf_sums.tolist())]
    real = realized.tolist()
    prof = profile_counts.tolist()
    acc_cost = float(cum_cost[0])
    up = u_play.tolist()
    ud = u_design.tolist() if discrete else None
    gam = gamma.tolist()
    bet = beta.tolist()
    etl = eta_lr.tolist()
    inf_norm = math.isinf(cost_p)
    span = hi - lo
    acts_out = []
    costs_out = []
    rows_out = [] if record_rows else None

    def value(s, c, i, w):
        if blend:
            x = w * tab[c][i] + (1.0 - w) * dst[i]
            if thresholded:
                o = orig[c][i]
                if on[c][i]:
                    if o < x:
                        x = o
                elif o > x:
                    x = o
        else:
            x = tab[c][i]
        if discrete:
            x = hi if ud[s][c][i] < (x - lo) / span else lo
        return x

    w = 1.0
    for s in range(n):
        t = t0 + s + 1
        if blend:
            w = float(t) ** exponent
        cell = 0
        acts = [0] * m
        probs = []
        for i in range(m):
            k = counts_l[i]
            row = lw[i]
            mx = row[0]
            for j in range(1, k):
                if row[j] > mx:
                    mx = row[j]
            e = [0.0] * k
            tot = 0.0
            for j in range(k):
                e[j] = math.exp(row[j] - mx)
                tot += e[j]
            g = gam[i]
            p = [(1.0 - g) * e[j] / tot + g / k for j in range(k)]
            cpi = cp[i]
            for j in range(k):
                cpi[j] += p[j]
            probs.append(p)
            u = up[s][i]
            c = 0.0
            a = k - 1
            for j in range(k - 1):
                c += p[j]
                if u < c:
                    a = j
                    break
            acts[i] = a
            cell += a * strides_l[i]
        acts_out.append(acts)

        cost = 0.0
        round_rows = [] if record_rows else None
        for i in range(m):
            k = counts_l[i]
            a = acts[i]
            st = strides_l[i]
            cfi = cf[i]
            rrow = []
            for b in range(k):
                x = value(s, cell + (b - a) * st, i, w)
                cfi[b] += x
                rrow.append(x)
            if record_rows:
                round_rows.append(rrow)
            loss = value(s, cell, i, w)
            real[i] += loss
            gain = (hi - loss) / span
            bt = bet[i]
            et = etl[i]
            p = probs[i]
            row = lw[i]
            for j in range(k):
                if j == a:
                    row[j] += et * ((gain + bt) / p[j])
                else:
                    row[j] += et * (bt / p[j])
            if t % renorm_every == 0:
                mx = max(row)
                for j in range(k):
                    row[j] -= mx
            d = abs(orig[cell][i] - loss)
            if inf_norm:
                if d > cost:
                    cost = d
            elif cost_p == 1.0:
                cost += d
            else:
                cost += d**cost_p
        if not inf_norm and cost_p != 1.0:
            cost = cost ** (1.0 / cost_p)
        cost = cost_eta * cost
        costs_out.append(cost)
        acc_cost += cost
        prof[cell] += 1
        if record_rows:
            rows_out.append(round_rows)

    for i in range(m):
        k = counts_l[i]
        logw[i, :k] = lw[i]
        cum_probs[i, :k] = cp[i]
        cf_sums[i, :k] = cf[i]
    realized[:] = real
    profile_counts[:] = prof
    cum_cost[0] = acc_cost
    if n:
        out_actions[:n] = acts_out
        out_cost[:n] = costs_out
        if record_rows:
            for s, rr in enumerate(rows_out):
                for i, row in enumerate(rr):
                    out_rows[s, i, : len(row)] = row
