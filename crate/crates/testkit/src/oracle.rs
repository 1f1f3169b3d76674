//! Naive reference scores: exhaustive search and pair enumeration
//! instead of assignment solvers and counting formulas.

use corefud::model::CorefDoc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OMention {
    pub nodes: Vec<u32>,
    pub head: u32,
    pub entity: usize,
    pub zero: bool,
}

/// Mentions ordered by first node, last node, node list, then entity index.
pub fn mentions_of(layer: &CorefDoc) -> Vec<OMention> {
    let mut out: Vec<OMention> = Vec::new();
    for (ei, e) in layer.entities().iter().enumerate() {
        for m in &e.mentions {
            out.push(OMention {
                nodes: m.nodes.clone(),
                head: m.head,
                entity: ei,
                zero: m.nodes.iter().all(|&n| layer.nodes()[n as usize].is_empty),
            });
        }
    }
    out.sort_by(|a, b| {
        (a.nodes[0], a.nodes.last(), &a.nodes, a.entity).cmp(&(b.nodes[0], b.nodes.last(), &b.nodes, b.entity))
    });
    out
}

pub fn partial_match(key: &OMention, resp: &OMention) -> bool {
    resp.nodes.contains(&key.head) && resp.nodes.iter().all(|n| key.nodes.contains(n))
}

fn overlap(a: &[u32], b: &[u32]) -> usize {
    a.iter().filter(|n| b.contains(n)).count()
}

/// Identical spans pair first, in list order; with `partial`, the rest is
/// the best matching by (size, total overlap, smallest sorted pair list),
/// found by enumerating every matching.
pub fn align(key: &[OMention], resp: &[OMention], partial: bool) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    let mut key_used = vec![false; key.len()];
    let mut resp_used = vec![false; resp.len()];
    for (k, km) in key.iter().enumerate() {
        for (r, rm) in resp.iter().enumerate() {
            if !resp_used[r] && km.nodes == rm.nodes {
                key_used[k] = true;
                resp_used[r] = true;
                pairs.push((k, r));
                break;
            }
        }
    }
    if partial {
        let mut best: Option<(usize, usize, Vec<(usize, usize)>)> = None;
        let mut current = Vec::new();
        enumerate(key, resp, 0, &key_used, &mut resp_used, &mut current, &mut best);
        pairs.extend(best.map(|b| b.2).unwrap_or_default());
    }
    pairs.sort_unstable();
    pairs
}

fn enumerate(
    key: &[OMention],
    resp: &[OMention],
    k: usize,
    key_used: &[bool],
    resp_used: &mut [bool],
    current: &mut Vec<(usize, usize)>,
    best: &mut Option<(usize, usize, Vec<(usize, usize)>)>,
) {
    if k == key.len() {
        let ov: usize = current.iter().map(|&(a, b)| overlap(&key[a].nodes, &resp[b].nodes)).sum();
        let better = match best {
            None => true,
            Some((n, o, list)) => {
                (current.len(), ov) > (*n, *o) || ((current.len(), ov) == (*n, *o) && *current < *list)
            }
        };
        if better {
            *best = Some((current.len(), ov, current.clone()));
        }
        return;
    }
    if !key_used[k] {
        for r in 0..resp.len() {
            if !resp_used[r] && partial_match(&key[k], &resp[r]) {
                resp_used[r] = true;
                current.push((k, r));
                enumerate(key, resp, k + 1, key_used, resp_used, current, best);
                current.pop();
                resp_used[r] = false;
            }
        }
    }
    enumerate(key, resp, k + 1, key_used, resp_used, current, best);
}

/// Entity clusters of mention ids: key mention `i` is `i`, an aligned
/// response mention takes its key's id, others get fresh ids.
pub fn clusters(
    key: &[OMention],
    resp: &[OMention],
    pairs: &[(usize, usize)],
) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let group = |ms: &[OMention], id: &dyn Fn(usize) -> usize| {
        let n = ms.iter().map(|m| m.entity + 1).max().unwrap_or(0);
        let mut out = vec![Vec::new(); n];
        for (i, m) in ms.iter().enumerate() {
            out[m.entity].push(id(i));
        }
        out.retain(|c: &Vec<usize>| !c.is_empty());
        out
    };
    let rid = |j: usize| {
        pairs
            .iter()
            .find(|p| p.1 == j)
            .map_or(key.len() + j, |p| p.0)
    };
    (group(key, &|i| i), group(resp, &rid))
}

fn div(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

fn f1(r: f64, p: f64) -> f64 {
    if r + p == 0.0 {
        0.0
    } else {
        2.0 * r * p / (r + p)
    }
}

/// (recall, precision, f1)
pub type Rpf = (f64, f64, f64);

fn rpf(r: f64, p: f64) -> Rpf {
    (r, p, f1(r, p))
}

fn entity_of(cs: &[Vec<usize>], m: usize) -> Option<usize> {
    cs.iter().position(|c| c.contains(&m))
}

fn muc_side(a: &[Vec<usize>], b: &[Vec<usize>]) -> (f64, f64) {
    let (mut num, mut den) = (0.0, 0.0);
    for c in a.iter().filter(|c| c.len() >= 2) {
        // Components of the graph linking members that share a `b` entity.
        let mut seen = vec![false; c.len()];
        let mut comps = 0;
        for s in 0..c.len() {
            if seen[s] {
                continue;
            }
            comps += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                for y in 0..c.len() {
                    let linked = match (entity_of(b, c[x]), entity_of(b, c[y])) {
                        (Some(p), Some(q)) => p == q,
                        _ => false,
                    };
                    if !seen[y] && linked {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        num += (c.len() - comps) as f64;
        den += (c.len() - 1) as f64;
    }
    (num, den)
}

pub fn muc(k: &[Vec<usize>], r: &[Vec<usize>]) -> Rpf {
    let (rn, rd) = muc_side(k, r);
    let (pn, pd) = muc_side(r, k);
    rpf(div(rn, rd), div(pn, pd))
}

fn b3_side(a: &[Vec<usize>], b: &[Vec<usize>]) -> f64 {
    let mut sum = 0.0;
    let mut n = 0;
    for c in a {
        for &m in c {
            n += 1;
            if let Some(bi) = entity_of(b, m) {
                sum += overlap_ids(c, &b[bi]) as f64 / c.len() as f64;
            }
        }
    }
    div(sum, n as f64)
}

fn overlap_ids(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.contains(x)).count()
}

pub fn b_cubed(k: &[Vec<usize>], r: &[Vec<usize>]) -> Rpf {
    rpf(b3_side(k, r), b3_side(r, k))
}

/// Best total similarity over all partial injections, by recursion.
fn best_assignment(sim: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
    if row == sim.len() {
        return 0.0;
    }
    let mut best = best_assignment(sim, row + 1, used);
    for c in 0..used.len() {
        if !used[c] {
            used[c] = true;
            best = best.max(sim[row][c] + best_assignment(sim, row + 1, used));
            used[c] = false;
        }
    }
    best
}

pub fn ceaf_e(k: &[Vec<usize>], r: &[Vec<usize>]) -> Rpf {
    let sim: Vec<Vec<f64>> = k
        .iter()
        .map(|a| {
            r.iter()
                .map(|b| 2.0 * overlap_ids(a, b) as f64 / (a.len() + b.len()) as f64)
                .collect()
        })
        .collect();
    let total = best_assignment(&sim, 0, &mut vec![false; r.len()]);
    rpf(div(total, k.len() as f64), div(total, r.len() as f64))
}

pub fn blanc(k: &[Vec<usize>], r: &[Vec<usize>]) -> Rpf {
    let mut ids: Vec<usize> = k.iter().chain(r).flatten().copied().collect();
    ids.sort_unstable();
    ids.dedup();
    let (mut ck, mut cr, mut cb, mut nk, mut nr, mut nb) = (0, 0, 0, 0, 0, 0);
    for i in 0..ids.len() {
        for j in i + 1..ids.len() {
            let (x, y) = (ids[i], ids[j]);
            let kl = match (entity_of(k, x), entity_of(k, y)) {
                (Some(a), Some(b)) => Some(a == b),
                _ => None,
            };
            let rl = match (entity_of(r, x), entity_of(r, y)) {
                (Some(a), Some(b)) => Some(a == b),
                _ => None,
            };
            ck += (kl == Some(true)) as u64;
            nk += (kl == Some(false)) as u64;
            cr += (rl == Some(true)) as u64;
            nr += (rl == Some(false)) as u64;
            cb += (kl == Some(true) && rl == Some(true)) as u64;
            nb += (kl == Some(false) && rl == Some(false)) as u64;
        }
    }
    let mut classes = Vec::new();
    for (a, b, both) in [(ck, cr, cb), (nk, nr, nb)] {
        if a + b > 0 {
            let (rr, pp) = (div(both as f64, a as f64), div(both as f64, b as f64));
            classes.push((rr, pp, f1(rr, pp)));
        }
    }
    if classes.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let n = classes.len() as f64;
    (
        classes.iter().map(|c| c.0).sum::<f64>() / n,
        classes.iter().map(|c| c.1).sum::<f64>() / n,
        classes.iter().map(|c| c.2).sum::<f64>() / n,
    )
}

fn lea_side(a: &[Vec<usize>], b: &[Vec<usize>]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for c in a {
        let resolved = if c.len() == 1 {
            let lone = entity_of(b, c[0]).is_some_and(|bi| b[bi].len() == 1);
            if lone { 1.0 } else { 0.0 }
        } else {
            let mut links = 0;
            let mut common = 0;
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    links += 1;
                    if let (Some(p), Some(q)) = (entity_of(b, c[i]), entity_of(b, c[j])) {
                        common += (p == q) as u64;
                    }
                }
            }
            common as f64 / links as f64
        };
        num += c.len() as f64 * resolved;
        den += c.len() as f64;
    }
    div(num, den)
}

pub fn lea(k: &[Vec<usize>], r: &[Vec<usize>]) -> Rpf {
    rpf(lea_side(k, r), lea_side(r, k))
}

/// Maximum total overlap over one-to-one mention alignments, by
/// exhaustive search over subsets of response mentions.
pub fn mor(key: &[OMention], resp: &[OMention]) -> Rpf {
    assert!(resp.len() <= 20, "oracle limited to 20 response mentions");
    let n = resp.len();
    let mut dp = vec![0usize; 1 << n];
    for km in key {
        let prev = dp.clone();
        for mask in 0..(1usize << n) {
            for (r, rm) in resp.iter().enumerate() {
                if mask & (1 << r) != 0 {
                    let o = overlap(&km.nodes, &rm.nodes);
                    dp[mask] = dp[mask].max(prev[mask ^ (1 << r)] + o);
                }
            }
        }
    }
    let total = dp[(1 << n) - 1] as f64;
    let ks: usize = key.iter().map(|m| m.nodes.len()).sum();
    let rs: usize = resp.iter().map(|m| m.nodes.len()).sum();
    rpf(div(total, ks as f64), div(total, rs as f64))
}

/// (tp, wl, fp, fn) for zero mentions, straight from the definition.
pub fn zero_counts(key: &[OMention], resp: &[OMention]) -> (u64, u64, u64, u64) {
    let earlier = |ms: &[OMention], i: usize| -> Vec<usize> {
        (0..i).filter(|&j| ms[j].entity == ms[i].entity).collect()
    };
    let key_zeros: Vec<usize> = (0..key.len()).filter(|&i| key[i].zero).collect();
    let resp_zeros: Vec<usize> = (0..resp.len()).filter(|&i| resp[i].zero).collect();
    let mut taken = vec![false; resp.len()];
    let mut counterpart_of_resp: Vec<Option<usize>> = vec![None; resp.len()];
    let mut counterpart = vec![None; key.len()];
    for &z in &key_zeros {
        if let Some(&r) = resp_zeros.iter().find(|&&r| !taken[r] && resp[r].nodes == key[z].nodes) {
            taken[r] = true;
            counterpart[z] = Some(r);
            counterpart_of_resp[r] = Some(z);
        }
    }
    let (mut tp, mut wl, mut fp, mut fn_) = (0, 0, 0, 0);
    for &z in &key_zeros {
        let key_prev = earlier(key, z);
        if key_prev.is_empty() {
            continue;
        }
        match counterpart[z] {
            Some(r) if !earlier(resp, r).is_empty() => {
                let hit = key_prev.iter().any(|&a| {
                    earlier(resp, r)
                        .iter()
                        .any(|&b| overlap(&key[a].nodes, &resp[b].nodes) > 0)
                });
                if hit {
                    tp += 1;
                } else {
                    wl += 1;
                }
            }
            _ => fn_ += 1,
        }
    }
    for &r in &resp_zeros {
        if earlier(resp, r).is_empty() {
            continue;
        }
        let key_anaphoric = counterpart_of_resp[r].is_some_and(|z| !earlier(key, z).is_empty());
        if !key_anaphoric {
            fp += 1;
        }
    }
    (tp, wl, fp, fn_)
}
