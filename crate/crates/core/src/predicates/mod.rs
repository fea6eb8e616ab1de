//! Curvature conditions as signed margins.
//!
//! A margin is positive exactly when the condition holds strictly, and is
//! measured in curvature units after rescaling to `λ = 1`. Boundary cases such
//! as `CP²` (2-nonnegative) sit at margin zero, so strictness is always
//! decided against an explicit threshold.

mod frames;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use frames::{frame_minimum, pic_margin_frames, FrameMinimum};

use crate::berger::BergerForm;
use crate::error::{Error, Result};
use crate::tensor::duality_blocks;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionMargin {
    pub name: String,
    pub margin: f64,
    pub witness: String,
}

impl ConditionMargin {
    pub fn holds(&self, tol: f64) -> bool {
        self.margin > tol
    }
}

/// The pointwise conditions appearing in the Einstein curvature table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Condition {
    Positive,
    TwoPositive,
    SectionalAboveTwelfth,
    ThreePositive,
    SectionalAboveThirtieth,
    SectionalPositive,
    Pic,
    HalfPicSelfDual,
    HalfPicAntiSelfDual,
    FourPositive,
    SectionalBelowOne,
    ScalarPositive,
    SixPositive,
}

impl Condition {
    pub const ALL: [Condition; 13] = [
        Condition::Positive,
        Condition::TwoPositive,
        Condition::SectionalAboveTwelfth,
        Condition::ThreePositive,
        Condition::SectionalAboveThirtieth,
        Condition::SectionalPositive,
        Condition::Pic,
        Condition::HalfPicSelfDual,
        Condition::HalfPicAntiSelfDual,
        Condition::FourPositive,
        Condition::SectionalBelowOne,
        Condition::ScalarPositive,
        Condition::SixPositive,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Condition::Positive => "positive",
            Condition::TwoPositive => "2-positive",
            Condition::SectionalAboveTwelfth => "K>1/12",
            Condition::ThreePositive => "3-positive",
            Condition::SectionalAboveThirtieth => "K>1/30",
            Condition::SectionalPositive => "K>0",
            Condition::Pic => "pic",
            Condition::HalfPicSelfDual => "half-pic+",
            Condition::HalfPicAntiSelfDual => "half-pic-",
            Condition::FourPositive => "4-positive",
            Condition::SectionalBelowOne => "K<1",
            Condition::ScalarPositive => "R>0",
            Condition::SixPositive => "6-positive",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Condition::Positive => "curvature operator positive",
            Condition::TwoPositive => "curvature operator 2-positive",
            Condition::SectionalAboveTwelfth => "sectional curvature > λ/12",
            Condition::ThreePositive => "curvature operator 3-positive",
            Condition::SectionalAboveThirtieth => "sectional curvature > λ/30",
            Condition::SectionalPositive => "positive sectional curvature",
            Condition::Pic => "positive isotropic curvature",
            Condition::HalfPicSelfDual => "half 2-positive / half PIC, self-dual side",
            Condition::HalfPicAntiSelfDual => "half 2-positive / half PIC, anti-self-dual side",
            Condition::FourPositive => "curvature operator 4-positive",
            Condition::SectionalBelowOne => "sectional curvature < λ",
            Condition::ScalarPositive => "positive scalar curvature",
            Condition::SixPositive => "curvature operator 6-positive",
        }
    }

    /// Margin on the form rescaled to `λ = 1`.
    pub fn margin(self, bf: &BergerForm) -> f64 {
        let n = bf.normalized();
        let (a, lam, mu) = (n.a(), n.lam(), n.mu());
        match self {
            Condition::Positive => k_smallest_sum(&n, 1),
            Condition::TwoPositive => k_smallest_sum(&n, 2),
            Condition::SectionalAboveTwelfth => a[0] - 1.0 / 12.0,
            Condition::ThreePositive => k_smallest_sum(&n, 3),
            Condition::SectionalAboveThirtieth => a[0] - 1.0 / 30.0,
            Condition::SectionalPositive => a[0],
            Condition::Pic => (lam[0] + lam[1]).min(mu[0] + mu[1]),
            Condition::HalfPicSelfDual => lam[0] + lam[1],
            Condition::HalfPicAntiSelfDual => mu[0] + mu[1],
            Condition::FourPositive => k_smallest_sum(&n, 4),
            Condition::SectionalBelowOne => 1.0 - a[2],
            Condition::ScalarPositive => 4.0 * n.lambda(),
            Condition::SixPositive => k_smallest_sum(&n, 6),
        }
    }

    pub fn holds(self, bf: &BergerForm, tol: f64) -> bool {
        self.margin(bf) > tol
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        let c = match key.as_str() {
            "positive" | "1-positive" => Condition::Positive,
            "2-positive" => Condition::TwoPositive,
            "k>1/12" | "sectional>1/12" => Condition::SectionalAboveTwelfth,
            "3-positive" => Condition::ThreePositive,
            "k>1/30" | "sectional>1/30" => Condition::SectionalAboveThirtieth,
            "k>0" | "sectional>0" | "positive-sectional" => Condition::SectionalPositive,
            "pic" => Condition::Pic,
            "half-pic+" | "half-2-positive+" | "half-pic-sd" => Condition::HalfPicSelfDual,
            "half-pic-" | "half-2-positive-" | "half-pic-asd" => Condition::HalfPicAntiSelfDual,
            "4-positive" => Condition::FourPositive,
            "k<1" | "sectional<1" => Condition::SectionalBelowOne,
            "r>0" | "scalar>0" => Condition::ScalarPositive,
            "6-positive" => Condition::SixPositive,
            _ => return Err(Error::UnknownCondition(s.to_string())),
        };
        Ok(c)
    }
}

fn labelled_eigenvalues(bf: &BergerForm) -> [(f64, &'static str); 6] {
    let (lam, mu) = (bf.lam(), bf.mu());
    let mut ev = [
        (lam[0], "lam1"),
        (lam[1], "lam2"),
        (lam[2], "lam3"),
        (mu[0], "mu1"),
        (mu[1], "mu2"),
        (mu[2], "mu3"),
    ];
    // stable: ties keep lam before mu
    ev.sort_by(|x, y| x.0.total_cmp(&y.0));
    ev
}

pub(crate) fn k_smallest_sum(bf: &BergerForm, k: usize) -> f64 {
    labelled_eigenvalues(bf)[..k].iter().map(|e| e.0).sum()
}

/// Sum of the `k` smallest operator eigenvalues `{aᵢ ± bᵢ}`.
pub fn k_positive_margin(bf: &BergerForm, k: usize) -> Result<ConditionMargin> {
    if !(1..=6).contains(&k) {
        return Err(Error::KOutOfRange { k });
    }
    let smallest = &labelled_eigenvalues(bf)[..k];
    Ok(ConditionMargin {
        name: format!("{k}-positive"),
        margin: smallest.iter().map(|e| e.0).sum(),
        witness: smallest.iter().map(|e| e.1).collect::<Vec<_>>().join("+"),
    })
}

/// `(min K, max K) = (a₁, a₃)`.
pub fn sectional_range(bf: &BergerForm) -> (f64, f64) {
    (bf.a()[0], bf.a()[2])
}

/// PIC as 2-positivity of both half operators: `min(lam₁+lam₂, mu₁+mu₂)`.
pub fn pic_margin_closed(bf: &BergerForm) -> ConditionMargin {
    let (lam, mu) = (bf.lam(), bf.mu());
    let (sd, asd) = (lam[0] + lam[1], mu[0] + mu[1]);
    ConditionMargin {
        name: "pic".into(),
        margin: sd.min(asd),
        witness: if sd <= asd { "lam1+lam2" } else { "mu1+mu2" }.into(),
    }
}

pub fn half_conditions(bf: &BergerForm) -> Vec<ConditionMargin> {
    let (lam, mu) = (bf.lam(), bf.mu());
    vec![
        ConditionMargin {
            name: "half-pic+".into(),
            margin: lam[0] + lam[1],
            witness: "self-dual: lam1+lam2".into(),
        },
        ConditionMargin {
            name: "half-pic-".into(),
            margin: mu[0] + mu[1],
            witness: "anti-self-dual: mu1+mu2".into(),
        },
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ImplicationKind {
    /// Follows from the algebra at a single point.
    Pointwise,
    /// Needs the maximum-principle argument over the whole manifold.
    Global,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Implication {
    pub antecedent: Condition,
    pub consequent: Condition,
    pub kind: ImplicationKind,
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.antecedent, self.consequent)
    }
}

const fn arrow(antecedent: Condition, consequent: Condition, kind: ImplicationKind) -> Implication {
    Implication {
        antecedent,
        consequent,
        kind,
    }
}

/// Arrows of the Einstein curvature table, each classified by what it needs.
pub const TABLE_ARROWS: [Implication; 16] = {
    use Condition::*;
    use ImplicationKind::*;
    [
        arrow(Positive, TwoPositive, Pointwise),
        arrow(TwoPositive, SectionalAboveTwelfth, Global),
        arrow(SectionalAboveTwelfth, ThreePositive, Pointwise),
        arrow(ThreePositive, SectionalAboveThirtieth, Global),
        arrow(ThreePositive, SectionalPositive, Global),
        arrow(SectionalAboveThirtieth, SectionalPositive, Pointwise),
        arrow(SectionalPositive, FourPositive, Pointwise),
        arrow(TwoPositive, Pic, Pointwise),
        arrow(Pic, TwoPositive, Global),
        arrow(Pic, HalfPicSelfDual, Pointwise),
        arrow(Pic, HalfPicAntiSelfDual, Pointwise),
        arrow(FourPositive, SectionalBelowOne, Pointwise),
        arrow(SectionalBelowOne, FourPositive, Global),
        arrow(FourPositive, SixPositive, Pointwise),
        arrow(ScalarPositive, SixPositive, Pointwise),
        arrow(SixPositive, ScalarPositive, Pointwise),
    ]
};

/// Table rows this crate does not evaluate.
pub const NOT_EVALUATED: [&str; 1] = ["conformally half PIC"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Vacuous,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImplicationVerdict {
    pub implication: Implication,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImplicationReport {
    pub lambda: f64,
    pub rescale: f64,
    pub margins: Vec<(Condition, f64)>,
    /// Verdicts for the pointwise arrows only.
    pub verdicts: Vec<ImplicationVerdict>,
}

impl ImplicationReport {
    pub fn margin(&self, c: Condition) -> f64 {
        self.margins
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, m)| *m)
            .expect("every condition is evaluated")
    }
}

/// Every table condition as a margin at `λ = 1`, plus verdicts of the
/// pointwise arrows with strictness threshold `tol`.
pub fn implication_report(bf: &BergerForm, tol: f64) -> ImplicationReport {
    let margins: Vec<(Condition, f64)> = Condition::ALL.iter().map(|&c| (c, c.margin(bf))).collect();
    let lookup = |c: Condition| margins.iter().find(|(k, _)| *k == c).unwrap().1;
    let verdicts = TABLE_ARROWS
        .iter()
        .filter(|imp| imp.kind == ImplicationKind::Pointwise)
        .map(|&implication| {
            let verdict = if lookup(implication.antecedent) <= tol {
                Verdict::Vacuous
            } else if lookup(implication.consequent) > tol {
                Verdict::Holds
            } else {
                Verdict::Violated
            };
            ImplicationVerdict {
                implication,
                verdict,
            }
        })
        .collect();
    ImplicationReport {
        lambda: bf.lambda(),
        rescale: 1.0 / bf.lambda(),
        margins,
        verdicts,
    }
}

/// One closed-form characterization compared with the eigenvalue computation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BulletCheck {
    pub name: &'static str,
    pub closed_form: f64,
    pub direct: f64,
    pub agrees: bool,
}

const BULLET_TOL: f64 = 1e-12;

/// Compares each closed form in Berger variables against sums of eigenvalues
/// obtained by numerically diagonalizing the reconstructed operator and its
/// half blocks. Values are at `λ = 1`.
pub fn bullet_equivalences_check(bf: &BergerForm) -> Vec<BulletCheck> {
    let n = bf.normalized();
    let (a, b) = (n.a(), n.b());
    let op = n.operator();
    let ev = op.eigenvalues();
    let blocks = duality_blocks(&op);
    let sorted3 = |m: nalgebra::Matrix3<f64>| {
        let e = m.symmetric_eigenvalues();
        let mut v = [e[0], e[1], e[2]];
        v.sort_by(f64::total_cmp);
        v
    };
    let plus = sorted3(blocks.half_plus());
    let minus = sorted3(blocks.half_minus());
    let prefix = |k: usize| ev[..k].iter().sum::<f64>();

    let equal = |name, closed_form: f64, direct: f64| BulletCheck {
        name,
        closed_form,
        direct,
        agrees: (closed_form - direct).abs() <= BULLET_TOL,
    };
    let s12 = a[0] + a[1];
    let t12 = b[0] + b[1];
    let four_closed = s12.min(1.0 + a[0] + b[0]).min(1.0 + a[0] - b[0]);
    let four_direct = prefix(4);
    vec![
        equal("positive sectional: (a1+b1)+(a1-b1) > 0", 2.0 * a[0], plus[0] + minus[0]),
        equal(
            "2-positive: (a1+a2)±(b1+b2) > 0 and a1 > 0",
            (s12 + t12).min(s12 - t12).min(2.0 * a[0]),
            prefix(2),
        ),
        equal(
            "PIC: (a1+a2)±(b1+b2) > 0",
            (s12 + t12).min(s12 - t12),
            (plus[0] + plus[1]).min(minus[0] + minus[1]),
        ),
        equal(
            "3-positive: 2a1+a2±b2 > 0",
            (2.0 * a[0] + a[1] + b[1]).min(2.0 * a[0] + a[1] - b[1]),
            prefix(3),
        ),
        BulletCheck {
            name: "4-positive: a1+a2 > 0 and 1+(a1±b1) > 0",
            closed_form: four_closed,
            direct: four_direct,
            agrees: (four_closed > 0.0) == (four_direct > 0.0)
                || (four_closed.abs() <= BULLET_TOL && four_direct.abs() <= BULLET_TOL),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    const THIRD: f64 = 1.0 / 3.0;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn k_positive_examples() {
        let cp2 = BergerForm::complex_projective_plane(1.0);
        let m3 = k_positive_margin(&cp2, 3).unwrap();
        assert!(close(m3.margin, THIRD));
        assert_eq!(m3.witness, "lam1+lam2+mu1");
        assert!(close(k_positive_margin(&cp2, 2).unwrap().margin, 0.0));
        assert!(close(k_positive_margin(&BergerForm::round_sphere(1.0), 1).unwrap().margin, THIRD));
        for bf in [cp2, BergerForm::product_of_spheres(2.5), BergerForm::round_sphere(0.7)] {
            assert!(close(k_positive_margin(&bf, 6).unwrap().margin, 2.0 * bf.lambda()));
        }
        assert_eq!(k_positive_margin(&cp2, 0), Err(Error::KOutOfRange { k: 0 }));
        assert_eq!(k_positive_margin(&cp2, 7), Err(Error::KOutOfRange { k: 7 }));
    }

    #[test]
    fn sectional_range_examples() {
        let (lo, hi) = sectional_range(&BergerForm::complex_projective_plane(1.0));
        assert!(close(lo, 1.0 / 6.0) && close(hi, 2.0 / 3.0));
        assert_eq!(sectional_range(&BergerForm::round_sphere(1.0)), (THIRD, THIRD));
        assert_eq!(sectional_range(&BergerForm::product_of_spheres(1.0)), (0.0, 1.0));
    }

    #[test]
    fn pic_and_half_examples() {
        assert!(close(pic_margin_closed(&BergerForm::round_sphere(1.0)).margin, 2.0 / 3.0));
        assert!(close(pic_margin_closed(&BergerForm::complex_projective_plane(1.0)).margin, 0.0));
        assert!(close(pic_margin_closed(&BergerForm::product_of_spheres(1.0)).margin, 0.0));

        let h = half_conditions(&BergerForm::complex_projective_plane(1.0));
        assert!(close(h[0].margin, 0.0) && close(h[1].margin, 2.0 / 3.0));
        let h = half_conditions(&BergerForm::round_sphere(1.0));
        assert!(close(h[0].margin, 2.0 / 3.0) && close(h[1].margin, 2.0 / 3.0));

        let bf = BergerForm::from_half_spectra([-0.1, 0.3, 0.8], [0.2, 0.3, 0.5], 1e-12).unwrap();
        assert!(close(half_conditions(&bf)[0].margin, 0.2));
    }

    #[test]
    fn table_for_model_spaces() {
        let s4 = implication_report(&BergerForm::round_sphere(1.0), 0.0);
        assert!(s4.margins.iter().all(|(_, m)| *m > 0.0));
        assert!(s4.verdicts.iter().all(|v| v.verdict == Verdict::Holds));

        let cp2 = implication_report(&BergerForm::complex_projective_plane(3.0), 1e-9);
        assert_eq!(cp2.rescale, 1.0 / 3.0);
        assert!(close(cp2.margin(Condition::ThreePositive), THIRD));
        assert!(close(cp2.margin(Condition::TwoPositive), 0.0));
        assert!(close(cp2.margin(Condition::SectionalAboveTwelfth), 1.0 / 12.0));
        assert!(close(cp2.margin(Condition::SectionalBelowOne), THIRD));
        assert!(cp2.verdicts.iter().all(|v| v.verdict != Verdict::Violated));

        let s2s2 = implication_report(&BergerForm::product_of_spheres(1.0), 1e-9);
        assert!(close(s2s2.margin(Condition::FourPositive), 0.0));
        assert!(close(s2s2.margin(Condition::SectionalBelowOne), 0.0));
        assert!(close(s2s2.margin(Condition::SixPositive), 2.0));
    }

    #[test]
    fn bullets_on_model_spaces() {
        for bf in [
            BergerForm::round_sphere(1.0),
            BergerForm::complex_projective_plane(1.0),
            BergerForm::product_of_spheres(1.0),
        ] {
            for check in bullet_equivalences_check(&bf) {
                assert!(check.agrees, "{check:?}");
            }
        }
        let cp2 = bullet_equivalences_check(&BergerForm::complex_projective_plane(1.0));
        assert!(close(cp2[3].closed_form, THIRD));
    }

    #[test]
    fn condition_names_parse() {
        for c in Condition::ALL {
            assert_eq!(c.id().parse::<Condition>().unwrap(), c);
        }
        assert_eq!("PIC".parse::<Condition>().unwrap(), Condition::Pic);
        assert_eq!("K>1/12".parse::<Condition>().unwrap(), Condition::SectionalAboveTwelfth);
        assert!(matches!("5-positive".parse::<Condition>(), Err(Error::UnknownCondition(_))));
    }

    #[test]
    fn margins_are_one_homogeneous_before_normalization() {
        let bf = BergerForm::from_half_spectra([-0.2, 0.4, 0.8], [0.1, 0.3, 0.6], 1e-12).unwrap();
        let big = bf.scaled(3.0);
        for k in 1..=6 {
            let m1 = k_positive_margin(&bf, k).unwrap().margin;
            let m3 = k_positive_margin(&big, k).unwrap().margin;
            assert!((3.0 * m1 - m3).abs() < 1e-14);
        }
        for c in Condition::ALL {
            assert!((c.margin(&bf) - c.margin(&big)).abs() < 1e-14);
        }
    }
}
