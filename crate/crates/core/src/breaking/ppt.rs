use std::fmt;

use crate::error::{Error, Result};
use crate::tensor::{min_eigenvalue, LabeledOperator};

/// Split of an operator's systems into two disjoint groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

impl Bipartition {
    pub fn new<S: AsRef<str>>(left: &[S], right: &[S]) -> Result<Self> {
        let left: Vec<String> = left.iter().map(|s| s.as_ref().to_string()).collect();
        let right: Vec<String> = right.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen: Vec<&String> = Vec::new();
        for l in left.iter().chain(right.iter()) {
            if seen.contains(&l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
            seen.push(l);
        }
        Ok(Bipartition { left, right })
    }

    fn check_covers(&self, op: &LabeledOperator) -> Result<()> {
        let sys = op.systems()?;
        for l in self.left.iter().chain(self.right.iter()) {
            if !sys.contains(l) {
                return Err(Error::UnknownLabel(l.clone()));
            }
        }
        if self.left.len() + self.right.len() != sys.len() {
            return Err(Error::dims(format!("cut {self} does not cover {sys}")));
        }
        Ok(())
    }

    /// Dimensions of the two sides on `op`.
    pub fn side_dims(&self, op: &LabeledOperator) -> Result<(usize, usize)> {
        let sys = op.systems()?;
        let prod = |side: &[String]| -> Result<usize> {
            side.iter()
                .try_fold(1usize, |acc, l| Ok(acc * sys.dim_of(l)?))
        };
        Ok((prod(&self.left)?, prod(&self.right)?))
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.left.join(""), self.right.join(""))
    }
}

/// Whether a PPT verdict settles separability at these local dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    /// PPT is equivalent to separability here.
    PptDecisive,
    /// PPT is only a necessary condition.
    PptNecessaryOnly,
}

impl Exactness {
    /// Decisive when one side is trivial or the dimension product is at
    /// most 6.
    pub fn for_dims(left: usize, right: usize) -> Self {
        if left.min(right) <= 1 || left * right <= 6 {
            Exactness::PptDecisive
        } else {
            Exactness::PptNecessaryOnly
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Exactness::PptDecisive => "ppt-decisive",
            Exactness::PptNecessaryOnly => "ppt-necessary-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PptVerdict {
    pub bipartition: Bipartition,
    /// Smallest eigenvalue of the partial transpose over the right side.
    pub min_eigenvalue: f64,
    pub is_ppt: bool,
    pub exactness: Exactness,
    pub tol: f64,
}

/// Positive-partial-transpose test across `cut`.
pub fn ppt_test(op: &LabeledOperator, cut: &Bipartition, tol: f64) -> Result<PptVerdict> {
    cut.check_covers(op)?;
    let deviation = op.hermiticity_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    let right: Vec<&str> = cut.right.iter().map(String::as_str).collect();
    let min = min_eigenvalue(&op.partial_transpose(&right)?)?;
    let (dl, dr) = cut.side_dims(op)?;
    Ok(PptVerdict {
        bipartition: cut.clone(),
        min_eigenvalue: min,
        is_ppt: min >= -tol,
        exactness: Exactness::for_dims(dl, dr),
        tol,
    })
}

/// PPT test across every bipartition into two nonempty groups. Each cut
/// appears once, with the first system on the left.
pub fn ppt_battery(op: &LabeledOperator, tol: f64) -> Result<Vec<PptVerdict>> {
    let labels: Vec<String> = op
        .systems()?
        .labels()
        .iter()
        .map(|s| s.to_string())
        .collect();
    let n = labels.len();
    if n < 2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    // bit k set: system k+1 on the right
    for mask in 1u64..(1u64 << (n - 1)) {
        let mut left = vec![labels[0].clone()];
        let mut right = Vec::new();
        for (k, l) in labels.iter().enumerate().skip(1) {
            if mask & (1 << (k - 1)) != 0 {
                right.push(l.clone());
            } else {
                left.push(l.clone());
            }
        }
        out.push(ppt_test(op, &Bipartition::new(&left, &right)?, tol)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{CMatrix, SystemList, C64};

    #[test]
    fn gamma_is_npt() {
        let g = LabeledOperator::gamma("A", "B", 2)
            .unwrap()
            .projector()
            .unwrap();
        let v = ppt_test(&g, &Bipartition::new(&["A"], &["B"]).unwrap(), 1e-9).unwrap();
        assert!(!v.is_ppt);
        assert!((v.min_eigenvalue + 1.0).abs() < 1e-12);
        assert_eq!(v.exactness, Exactness::PptDecisive);
    }

    #[test]
    fn product_is_ppt() {
        let x = LabeledOperator::square(
            CMatrix::from_row_slice(
                2,
                2,
                &[
                    C64::new(2., 0.),
                    C64::new(0., 1.),
                    C64::new(0., -1.),
                    C64::new(1., 0.),
                ],
            ),
            SystemList::single("A", 2),
        )
        .unwrap();
        let y = LabeledOperator::identity(SystemList::single("B", 3));
        let v = ppt_test(
            &x.kron(&y).unwrap(),
            &Bipartition::new(&["A"], &["B"]).unwrap(),
            1e-9,
        )
        .unwrap();
        assert!(v.is_ppt);
    }

    #[test]
    fn battery_counts_cuts() {
        let sys = SystemList::from_pairs([("A", 2), ("B", 2), ("C", 2)]).unwrap();
        let b = ppt_battery(&LabeledOperator::identity(sys), 1e-9).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.iter().all(|v| v.is_ppt));
    }

    #[test]
    fn cut_must_cover() {
        let g = LabeledOperator::gamma("A", "B", 2)
            .unwrap()
            .projector()
            .unwrap();
        assert!(ppt_test(&g, &Bipartition::new(&["A"], &[] as &[&str]).unwrap(), 1e-9).is_err());
        assert!(Bipartition::new(&["A"], &["A"]).is_err());
    }

    #[test]
    fn exactness_rule() {
        assert_eq!(Exactness::for_dims(2, 3), Exactness::PptDecisive);
        assert_eq!(Exactness::for_dims(3, 3), Exactness::PptNecessaryOnly);
        assert_eq!(Exactness::for_dims(1, 16), Exactness::PptDecisive);
        assert_eq!(Exactness::for_dims(4, 4), Exactness::PptNecessaryOnly);
    }
}
