//! Closed-form guarantees and the upper bound for any impartial mechanism.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;

use crate::distribution::{fmt_decimal, ratio, serialize_rational, Rational};
use crate::error::{Error, Result};
use crate::mechanisms::mix::mix_weights;

/// Guarantee of the permutation mechanism on graphs with maximum indegree `Δ`.
pub fn perm_alpha(delta: usize) -> Result<Rational> {
    match delta {
        0 => Err(Error::input("perm_alpha needs delta >= 1")),
        1 => Ok(ratio(1, 1)),
        d if d % 2 == 0 => {
            let d = d as i64;
            Ok(ratio(3 * d + 2, 4 * d + 4))
        }
        d => perm_alpha(d - 1),
    }
}

/// Guarantee of the permutation mechanism when `Δ ∈ {2, 3}` and at least two
/// vertices have indegree 2 or more. Below this only the single-high-vertex case remains.
pub fn perm_alpha_multi_high() -> Rational {
    ratio(31, 45)
}

/// General PRUG^D guarantee `1/2 + (7Δ-9) / (6Δ(3Δ-2))`.
pub fn prugd_alpha(delta: usize) -> Result<Rational> {
    if delta < 2 {
        return Err(Error::input("prugd_alpha needs delta >= 2"));
    }
    let d = delta as i64;
    Ok(ratio(1, 2) + ratio(7 * d - 9, 6 * d * (3 * d - 2)))
}

/// The two sharper PRUG^D guarantees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrugdSpecials {
    /// All graphs with `Δ = 2`.
    #[serde(serialize_with = "serialize_rational")]
    pub delta2: Rational,
    /// `Δ = 3` with exactly one vertex of indegree at least 2.
    #[serde(serialize_with = "serialize_rational")]
    pub delta3_single_high: Rational,
}

pub fn prugd_alpha_special() -> PrugdSpecials {
    PrugdSpecials {
        delta2: ratio(65, 96),
        delta3_single_high: ratio(13, 18),
    }
}

/// `1/2 + 1/n`, the guarantee of random dictatorship on `𝒢ₙ` for `n ≤ 5`.
pub fn rd_alpha(n: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::input("rd_alpha needs n >= 2"));
    }
    Ok(ratio(1, 2) + ratio(1, n as i64))
}

/// `(3n³ - 19n² + 30n - 4) / (4n(n-2)(n-4))`: no impartial mechanism does better on `𝒢ₙ`.
pub fn upper_bound(n: usize) -> Result<Rational> {
    if n < 6 {
        return Err(Error::input(format!("upper_bound needs n >= 6, got {n}")));
    }
    let n = BigInt::from(n);
    let num = BigInt::from(3) * &n * &n * &n - BigInt::from(19) * &n * &n + BigInt::from(30) * &n - 4;
    let den = BigInt::from(4) * &n * (&n - 2) * (&n - 4);
    Ok(Rational::new(num, den))
}

/// Minimum of [`upper_bound`] over `lo..=hi` with its argmin (first on ties).
pub fn upper_bound_min(lo: usize, hi: usize) -> Result<(usize, Rational)> {
    let mut best: Option<(usize, Rational)> = None;
    for n in lo.max(6)..=hi {
        let u = upper_bound(n)?;
        if best.as_ref().is_none_or(|(_, b)| u < *b) {
            best = Some((n, u));
        }
    }
    best.ok_or_else(|| Error::input(format!("empty range {lo}..={hi}")))
}

/// The mixture's weighted bound `825/1049 · perm + 224/1049 · prugd`.
pub fn mix_combination(perm: &Rational, prugd: &Rational) -> Rational {
    let (wp, wd) = mix_weights();
    wp * perm + wd * prugd
}

/// Bound for `Δ ≥ 4` as the mixture's correctness argument evaluates it at `Δ = 5`,
/// with `4Δ` where the PRUG^D guarantee has `6Δ`: `2923/4196 - 377/20980 = 7119/10490`.
/// The table in [`mix_alpha_table`] uses the guarantee as stated, which gives a
/// slightly smaller value at `Δ = 5`.
pub fn mix_branch_bound_delta5() -> Rational {
    let d = 5i64;
    ratio(2923, 4196) - ratio(907 * d + 366, 4196 * d * (3 * d - 2))
}

/// Which graphs a table row covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HighVertices {
    Any,
    /// At least two vertices of indegree ≥ 2.
    Multiple,
    /// Exactly one vertex of indegree ≥ 2.
    Single,
}

impl HighVertices {
    pub fn label(self) -> &'static str {
        match self {
            HighVertices::Any => "any",
            HighVertices::Multiple => "multi",
            HighVertices::Single => "single",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub delta: usize,
    pub case: HighVertices,
    #[serde(serialize_with = "serialize_rational")]
    pub perm: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub prugd: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub mix: Rational,
}

/// Guarantees on graphs with `n ≥ 6` and maximum indegree `Δ`, for `Δ` in
/// `2..=delta_max`. `Δ = 3` has two rows.
pub fn mix_alpha_table(delta_max: usize) -> Result<Vec<BoundRow>> {
    if delta_max < 2 {
        return Err(Error::input("the table needs delta_max >= 2"));
    }
    let sp = prugd_alpha_special();
    let mut rows = Vec::new();
    let mut push = |delta, case, perm: Rational, prugd: Rational| {
        let mix = mix_combination(&perm, &prugd);
        rows.push(BoundRow {
            delta,
            case,
            perm,
            prugd,
            mix,
        });
    };
    for delta in 2..=delta_max {
        match delta {
            2 => push(2, HighVertices::Any, perm_alpha(2)?, sp.delta2.clone()),
            3 => {
                push(3, HighVertices::Multiple, perm_alpha_multi_high(), prugd_alpha(3)?);
                push(3, HighVertices::Single, perm_alpha(3)?, sp.delta3_single_high.clone());
            }
            d => push(d, HighVertices::Any, perm_alpha(d)?, prugd_alpha(d)?),
        }
    }
    Ok(rows)
}

/// Minimum of the mix column.
pub fn mix_floor(rows: &[BoundRow]) -> Option<&BoundRow> {
    rows.iter().min_by(|a, b| a.mix.cmp(&b.mix))
}

/// CSV with exact and 12-digit decimal columns. Decimal columns are lossy.
pub fn figure3_csv(delta_max: usize) -> Result<String> {
    let rows = mix_alpha_table(delta_max)?;
    let mut out = String::from("delta,case,perm,prugd,mix,perm_decimal,prugd_decimal,mix_decimal\n");
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.delta,
            r.case.label(),
            crate::distribution::fmt_rational(&r.perm),
            crate::distribution::fmt_rational(&r.prugd),
            crate::distribution::fmt_rational(&r.mix),
            fmt_decimal(&r.perm),
            fmt_decimal(&r.prugd),
            fmt_decimal(&r.mix),
        )
        .expect("writing to a String");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_alpha_values() {
        assert_eq!(perm_alpha(1).unwrap(), ratio(1, 1));
        assert_eq!(perm_alpha(2).unwrap(), ratio(2, 3));
        assert_eq!(perm_alpha(3).unwrap(), ratio(2, 3));
        assert_eq!(perm_alpha(4).unwrap(), ratio(7, 10));
        assert_eq!(perm_alpha(5).unwrap(), ratio(7, 10));
        assert!(perm_alpha(0).is_err());
        // odd Δ: 3/4 - 1/(4Δ)
        for d in (5..40).step_by(2) {
            assert_eq!(perm_alpha(d).unwrap(), ratio(3, 4) - ratio(1, 4 * d as i64));
        }
    }

    #[test]
    fn prugd_alpha_values() {
        assert_eq!(prugd_alpha(5).unwrap(), ratio(1, 2) + ratio(13, 195));
        assert_eq!(prugd_alpha(3).unwrap(), ratio(25, 42));
        assert_eq!(prugd_alpha(4).unwrap(), ratio(139, 240));
        let s = prugd_alpha_special();
        assert_eq!((s.delta2, s.delta3_single_high), (ratio(65, 96), ratio(13, 18)));
    }

    #[test]
    fn upper_bound_values() {
        assert_eq!(upper_bound(7).unwrap(), ratio(76, 105));
        assert_eq!(upper_bound(6).unwrap(), ratio(35, 48));
        assert!(upper_bound(5).is_err());
        assert_eq!(upper_bound_min(6, 200).unwrap(), (7, ratio(76, 105)));
    }

    #[test]
    fn mixture_combinations() {
        let rows = mix_alpha_table(15).unwrap();
        assert_eq!(rows.len(), 15);
        assert_eq!(rows[0].mix, ratio(2105, 3147));
        assert_eq!(rows[1].perm, ratio(31, 45));
        assert_eq!(rows[1].mix, ratio(2105, 3147));
        assert_eq!(rows[2].mix, ratio(6406, 9441));
        assert_eq!(
            mix_combination(&ratio(2, 3), &ratio(65, 96)),
            ratio(550, 1049) + ratio(455, 3147)
        );
        assert_eq!(mix_floor(&rows).unwrap().mix, ratio(2105, 3147));
        assert_eq!(mix_branch_bound_delta5(), ratio(7119, 10490));
        assert_eq!(ratio(2923, 4196) - ratio(377, 20980), ratio(7119, 10490));
        let d5 = rows.iter().find(|r| r.delta == 5).unwrap();
        assert_eq!(d5.mix, ratio(21133, 31470));
        assert!(d5.mix > ratio(2105, 3147));
    }

    #[test]
    fn csv_layout() {
        let csv = figure3_csv(4).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("2,any,2/3,65/96,2105/3147,"));
        assert!(lines[4].starts_with("4,any,7/10,139/240,"));
    }
}
