//! The constraint chain behind the upper bound for symmetric impartial mechanisms.
//!
//! On the 2-cycle-with-paths family `G_0..G_{n'}` (with `n' = ⌊n/2⌋ - 1`), the
//! cycle `C_n`, the graph `C_{2,n}` and the redirected graphs `G'_i`, every
//! symmetric impartial mechanism satisfies a fixed set of identities and
//! inequalities. This module evaluates a concrete mechanism on the family and
//! checks each of them, after confirming symmetry on every family graph.

use serde::Serialize;

use crate::analysis::bounds::upper_bound;
use crate::analysis::ratio::ratio_of;
use crate::analysis::symmetry::symmetry_witness;
use crate::distribution::{ratio, serialize_rational, Rational, SelectionDistribution};
use crate::error::{Error, Result};
use crate::generators::{cycle, two_cycle_path, ub_family, ub_family_max_index, ub_family_prime};
use crate::graph::NominationGraph;
use crate::mechanisms::{self, ExactConfig, MechanismId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCheck {
    pub name: String,
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: Rational,
    pub relation: Relation,
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UbChainReport {
    pub mechanism: String,
    pub n: usize,
    pub nprime: usize,
    /// `p_v = f_v(G_0)`.
    #[serde(serialize_with = "crate::distribution::serialize_rationals")]
    pub p: Vec<Rational>,
    /// `x_i = f_2(G_i)` for `i = 1..=n'`.
    #[serde(serialize_with = "crate::distribution::serialize_rationals")]
    pub x: Vec<Rational>,
    pub checks: Vec<ChainCheck>,
    /// Smallest ratio over `G'_1..G'_{n'}`.
    #[serde(serialize_with = "serialize_rational")]
    pub min_family_ratio: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub upper_bound: Rational,
}

impl UbChainReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ChainCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

struct Checks(Vec<ChainCheck>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, lhs: Rational, relation: Relation, rhs: Rational) {
        let holds = relation.holds(&lhs, &rhs);
        self.0.push(ChainCheck {
            name: name.into(),
            lhs,
            relation,
            rhs,
            holds,
        });
    }
}

/// The graphs the chain is evaluated on, labelled.
pub fn chain_family(n: usize) -> Result<Vec<(String, NominationGraph)>> {
    let np = ub_family_max_index(n);
    let mut fam = vec![
        ("C_n".to_string(), cycle(n)?),
        ("C_2,n".to_string(), two_cycle_path(n)?),
    ];
    for i in 0..=np {
        fam.push((format!("G_{i}"), ub_family(n, i)?));
    }
    for i in 1..=np {
        fam.push((format!("G'_{i}"), ub_family_prime(n, i)?));
    }
    Ok(fam)
}

pub fn verify_ub_chain(id: MechanismId, n: usize, cfg: &ExactConfig) -> Result<UbChainReport> {
    if !id.is_exact() {
        return Err(Error::Precondition(format!(
            "{id} may select nobody; the chain needs an exact mechanism"
        )));
    }
    verify_ub_chain_with(id.name(), n, cfg, |g, c| mechanisms::exact(id, g, c))
}

/// Same as [`verify_ub_chain`] for an arbitrary exact evaluator.
pub fn verify_ub_chain_with<F>(name: &str, n: usize, cfg: &ExactConfig, eval: F) -> Result<UbChainReport>
where
    F: Fn(&NominationGraph, &ExactConfig) -> Result<SelectionDistribution> + Sync,
{
    if n < 6 {
        return Err(Error::input(format!("the chain needs n >= 6, got {n}")));
    }
    let family = chain_family(n)?;
    for (label, g) in &family {
        if let Some(w) = symmetry_witness(g, cfg, &eval)? {
            return Err(Error::Precondition(format!("{name} is not symmetric on {label}: {w}")));
        }
    }
    let f = |g: &NominationGraph| eval(g, cfg);
    let np = ub_family_max_index(n);
    let g: Vec<SelectionDistribution> = (0..=np).map(|i| f(&ub_family(n, i)?)).collect::<Result<_>>()?;
    let cn = f(&cycle(n)?)?;
    let c2n = f(&two_cycle_path(n)?)?;
    // 1-based accessors
    let p = |v: usize| g[0].prob(v).clone();
    let fi = |i: usize, v: usize| g[i].prob(v).clone();
    let ni = n as i64;
    let one = ratio(1, 1);

    let mut c = Checks(Vec::new());
    c.push("p_1 = f_1(C_n)", p(1), Relation::Eq, cn.prob(1).clone());
    c.push("f_1(C_n) = 1/n", cn.prob(1).clone(), Relation::Eq, ratio(1, ni));
    c.push("p_3 = f_3(C_2,n)", p(3), Relation::Eq, c2n.prob(3).clone());
    c.push("p_3 <= 1/(n-2)", p(3), Relation::Le, ratio(1, ni - 2));
    for i in 0..np {
        c.push(
            format!("f_2(G_{i}) = f_1(G_{})", i + 1),
            fi(i, 2),
            Relation::Eq,
            fi(i + 1, 1),
        );
    }
    for i in 1..=np {
        c.push(
            format!("f_3(G_{i}) = p_{}", n - i + 1),
            fi(i, 3),
            Relation::Eq,
            p(n - i + 1),
        );
        c.push(
            format!("f_{}(G_{i}) = p_{}", i + 3, i + 3),
            fi(i, i + 3),
            Relation::Eq,
            p(i + 3),
        );
    }
    let x: Vec<Rational> = (1..=np).map(|i| fi(i, 2)).collect();
    let xi = |i: usize| x[i - 1].clone();

    let tail: Rational = (4..=n).fold(p(2), |acc, v| acc + p(v));
    c.push(
        "p_2 + sum_{v>=4} p_v >= (n^2-4n+2)/(n(n-2))",
        tail,
        Relation::Ge,
        ratio(ni * ni - 4 * ni + 2, ni * (ni - 2)),
    );
    c.push(
        "p_2 + p_4 + p_n + x_1 <= 1",
        p(2) + p(4) + p(n) + xi(1),
        Relation::Le,
        one.clone(),
    );
    for i in 2..=np {
        c.push(
            format!("p_{} + p_{} + x_{} + x_{i} <= 1", n - i + 1, i + 3, i - 1),
            p(n - i + 1) + p(i + 3) + xi(i - 1) + xi(i),
            Relation::Le,
            one.clone(),
        );
    }

    let mut min_family_ratio: Option<Rational> = None;
    for i in 1..=np {
        let gp = ub_family_prime(n, i)?;
        let d = f(&gp)?;
        c.push(format!("f_2(G'_{i}) = x_{i}"), d.prob(2).clone(), Relation::Eq, xi(i));
        let (_, r) = ratio_of(&gp, &d)?;
        c.push(
            format!("ratio(G'_{i}) <= (x_{i} + 1)/2"),
            r.clone(),
            Relation::Le,
            (xi(i) + &one) / ratio(2, 1),
        );
        if min_family_ratio.as_ref().is_none_or(|m| r < *m) {
            min_family_ratio = Some(r);
        }
    }
    let min_family_ratio = min_family_ratio.expect("n >= 6 gives n' >= 2");
    let ub = upper_bound(n)?;
    let min_x = x.iter().min().expect("non-empty").clone();
    c.push(
        "(min x + 1)/2 <= upper_bound(n)",
        (min_x + &one) / ratio(2, 1),
        Relation::Le,
        ub.clone(),
    );
    c.push(
        "min ratio(G'_i) <= upper_bound(n)",
        min_family_ratio.clone(),
        Relation::Le,
        ub.clone(),
    );

    Ok(UbChainReport {
        mechanism: name.to_string(),
        n,
        nprime: np,
        p: g[0].probs().to_vec(),
        x,
        checks: c.0,
        min_family_ratio,
        upper_bound: ub,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rd_chain_at_six() {
        let r = verify_ub_chain(MechanismId::Rd, 6, &ExactConfig::default()).unwrap();
        assert_eq!(r.p[0], ratio(1, 6));
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn family_size() {
        assert_eq!(chain_family(6).unwrap().len(), 2 + 3 + 2);
        assert_eq!(chain_family(7).unwrap().len(), 2 + 3 + 2);
        assert_eq!(chain_family(8).unwrap().len(), 2 + 4 + 3);
    }

    #[test]
    fn inexact_prug_is_rejected() {
        let e = verify_ub_chain(MechanismId::Prug, 6, &ExactConfig::default()).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)));
    }

    #[test]
    fn asymmetric_evaluator_is_rejected_with_witness() {
        // always selects vertex 1: impartial and exact, but not symmetric
        let first = |g: &NominationGraph, _: &ExactConfig| {
            let mut p = vec![ratio(0, 1); g.n()];
            p[0] = ratio(1, 1);
            SelectionDistribution::new(p)
        };
        let e = verify_ub_chain_with("first", 6, &ExactConfig::default(), first).unwrap_err();
        let Error::Precondition(msg) = e else { panic!("{e}") };
        assert!(msg.contains("not symmetric on C_n: relabeling"), "{msg}");
    }

    #[test]
    fn prugd_is_symmetric_so_the_chain_applies() {
        let r = verify_ub_chain(MechanismId::PrugD, 6, &ExactConfig::default()).unwrap();
        assert!(r.passed());
    }
}
