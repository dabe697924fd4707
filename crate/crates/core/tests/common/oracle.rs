//! Reference evaluator written directly from the textbook definitions, in exact
//! rational arithmetic. Shares no code with the library.

use num_rational::Ratio;

use super::GridInstance;

pub type Q = Ratio<i128>;

fn q(x: i64) -> Q {
    Q::from_integer(x as i128)
}

/// "How much does x beat y": positive when x is better, on either direction.
fn advantage(x: i64, y: i64, gain: bool) -> i64 {
    if gain {
        x - y
    } else {
        y - x
    }
}

fn partial_c(inst: &GridInstance, j: usize, x: i64, y: i64) -> Q {
    // x S y on criterion j: fully true within the indifference band,
    // fully false once y is better than x by at least p.
    let shortfall = -advantage(x, y, inst.gain[j]);
    if shortfall <= inst.q[j] {
        q(1)
    } else if shortfall >= inst.p[j] {
        q(0)
    } else {
        Q::new((inst.p[j] - shortfall) as i128, (inst.p[j] - inst.q[j]) as i128)
    }
}

fn partial_d(inst: &GridInstance, j: usize, x: i64, y: i64) -> Q {
    let Some(v) = inst.v[j] else { return q(0) };
    let shortfall = -advantage(x, y, inst.gain[j]);
    if shortfall <= inst.p[j] {
        q(0)
    } else if shortfall >= v {
        q(1)
    } else {
        Q::new((shortfall - inst.p[j]) as i128, (v - inst.p[j]) as i128)
    }
}

/// σ(x, y) for two rows of the instance.
pub fn sigma(inst: &GridInstance, x: &[i64], y: &[i64]) -> Q {
    let total: i64 = inst.w.iter().sum();
    let mut c = q(0);
    for j in 0..x.len() {
        c += Q::new(inst.w[j] as i128, total as i128) * partial_c(inst, j, x[j], y[j]);
    }
    let mut s = c;
    for j in 0..x.len() {
        let d = partial_d(inst, j, x[j], y[j]);
        if d > c {
            s = s * (q(1) - d) / (q(1) - c);
        }
    }
    s
}

/// Every σ(a, b_h) and σ(b_h, a) value of the instance.
pub fn all_sigmas(inst: &GridInstance) -> Vec<Q> {
    inst.profiles
        .iter()
        .flat_map(|b| [sigma(inst, &inst.alternative, b), sigma(inst, b, &inst.alternative)])
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    PessimisticStandard,
    PessimisticPaper,
    Optimistic,
}

/// 1-based class of the alternative.
pub fn classify(inst: &GridInstance, lambda: Q, rule: Rule) -> usize {
    let a = &inst.alternative;
    let outranks_profile: Vec<bool> = inst.profiles.iter().map(|b| sigma(inst, a, b) >= lambda).collect();
    let profile_outranks: Vec<bool> = inst.profiles.iter().map(|b| sigma(inst, b, a) >= lambda).collect();
    let categories = inst.profiles.len() + 1;
    match rule {
        Rule::PessimisticStandard => {
            // one above the best profile the alternative outranks
            1 + (1..categories).filter(|&h| outranks_profile[h - 1]).max().unwrap_or(0)
        }
        Rule::PessimisticPaper => {
            1 + (1..categories)
                .filter(|&h| outranks_profile[h - 1] && !profile_outranks[h - 1])
                .max()
                .unwrap_or(0)
        }
        Rule::Optimistic => (1..categories)
            .filter(|&h| profile_outranks[h - 1] && !outranks_profile[h - 1])
            .min()
            .unwrap_or(categories),
    }
}
