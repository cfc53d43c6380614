//! Built-in test problems.
//!
//! Names are lowercase. A catalog label is the family name, followed by `-<n>` when the
//! dimension differs from the family default (`penalty2-10`, `ext_rosenbrock-1200`).
//! [`get_problem`] accepts either form.

mod large;
mod mgh;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::problem::Problem;
use large::{Large, LargeProblem};
use mgh::{LeastSquares, Mgh};

/// Default dimension for the large-scale families. Divisible by 2, 3 and 4.
pub const LARGE_N: usize = 1200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SizeClass {
    Small,
    Large,
    All,
}

impl core::str::FromStr for SizeClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "small" => Ok(SizeClass::Small),
            "large" => Ok(SizeClass::Large),
            "all" => Ok(SizeClass::All),
            _ => Err(Error::Parameter(format!("unknown problem set `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Mgh(Mgh),
    Large(Large),
    Quadratic,
}

struct FamilyInfo {
    name: &'static str,
    family: Family,
    default_n: usize,
}

const fn mgh(name: &'static str, kind: Mgh, default_n: usize) -> FamilyInfo {
    FamilyInfo {
        name,
        family: Family::Mgh(kind),
        default_n,
    }
}

const fn lg(name: &'static str, kind: Large) -> FamilyInfo {
    FamilyInfo {
        name,
        family: Family::Large(kind),
        default_n: LARGE_N,
    }
}

const FAMILIES: &[FamilyInfo] = &[
    mgh("rosenbrock2", Mgh::Rosenbrock, 2),
    FamilyInfo {
        name: "quadratic",
        family: Family::Quadratic,
        default_n: 2,
    },
    mgh("beale", Mgh::Beale, 2),
    mgh("brown_badly_scaled", Mgh::BrownBadlyScaled, 2),
    mgh("powell_badly_scaled", Mgh::PowellBadlyScaled, 2),
    mgh("variably_dimensioned", Mgh::VariablyDimensioned, 2),
    mgh("watson", Mgh::Watson, 2),
    mgh("box3d", Mgh::Box3d, 3),
    mgh("gaussian", Mgh::Gaussian, 3),
    mgh("gulf", Mgh::Gulf, 3),
    mgh("helical_valley", Mgh::HelicalValley, 3),
    mgh("brown_dennis", Mgh::BrownDennis, 4),
    FamilyInfo {
        name: "ext_rosenbrock",
        family: Family::Large(Large::ExtRosenbrock),
        default_n: 4,
    },
    FamilyInfo {
        name: "ext_powell",
        family: Family::Large(Large::ExtPowell),
        default_n: 4,
    },
    mgh("penalty1", Mgh::Penalty1, 4),
    mgh("penalty2", Mgh::Penalty2, 4),
    mgh("trigonometric", Mgh::Trigonometric, 4),
    mgh("wood", Mgh::Wood, 4),
    mgh("biggs_exp6", Mgh::BiggsExp6, 6),
    mgh("chebyquad", Mgh::Chebyquad, 6),
    lg("ext_beale", Large::ExtBeale),
    lg("dixmaana", Large::Dixmaan('A')),
    lg("dixmaanb", Large::Dixmaan('B')),
    lg("dixmaanc", Large::Dixmaan('C')),
    lg("dixmaand", Large::Dixmaan('D')),
    lg("dixmaane", Large::Dixmaan('E')),
    lg("dixmaanf", Large::Dixmaan('F')),
    lg("dixmaang", Large::Dixmaan('G')),
    lg("dixmaanh", Large::Dixmaan('H')),
    lg("dixmaani", Large::Dixmaan('I')),
    lg("dixmaanj", Large::Dixmaan('J')),
    lg("dixmaank", Large::Dixmaan('K')),
    lg("dixmaanl", Large::Dixmaan('L')),
    lg("tridia", Large::Tridia),
    lg("dqdrtic", Large::Dqdrtic),
    lg("arwhead", Large::Arwhead),
    lg("liarwhd", Large::Liarwhd),
    lg("nondquar", Large::Nondquar),
    lg("qf1", Large::Qf1),
    lg("qf2", Large::Qf2),
    lg("edensch", Large::Edensch),
    lg("engval1", Large::Engval1),
    lg("bdqrtic", Large::Bdqrtic),
    lg("diagonal2", Large::Diagonal2),
    lg("diagonal3", Large::Diagonal3),
    lg("diagonal4", Large::Diagonal4),
    lg("diagonal5", Large::Diagonal5),
    lg("diagonal7", Large::Diagonal7),
    lg("diagonal8", Large::Diagonal8),
    lg("ext_wood", Large::ExtWood),
    lg("raydan1", Large::Raydan1),
    lg("sincos", Large::Sincos),
    lg("cosine", Large::Cosine),
    lg("himmelbg", Large::Himmelbg),
    lg("broyden_tridiagonal", Large::BroydenTridiagonal),
    lg("ext_trid1", Large::ExtTrid1),
    lg("ext_trid2", Large::ExtTrid2),
    lg("ext_himmelblau", Large::ExtHimmelblau),
    lg("quartc", Large::Quartc),
    lg("ext_denschnb", Large::ExtDenschnb),
    lg("ext_denschnf", Large::ExtDenschnf),
    lg("ext_tet", Large::ExtTet),
    lg("hager", Large::Hager),
    lg("ext_penalty", Large::ExtPenalty),
    lg("ext_white_holst", Large::ExtWhiteHolst),
    lg("ext_qp1", Large::ExtQp1),
    lg("ext_bd1", Large::ExtBd1),
    lg("ext_maratos", Large::ExtMaratos),
    lg("bdexp", Large::Bdexp),
    lg("perturbed_quadratic", Large::PerturbedQuadratic),
    lg("dixon3dq", Large::Dixon3dq),
    lg("nonscomp", Large::Nonscomp),
];

/// The small set in benchmark order: `(family, n)`.
const SMALL_SET: &[(&str, usize)] = &[
    ("beale", 2),
    ("brown_badly_scaled", 2),
    ("powell_badly_scaled", 2),
    ("variably_dimensioned", 2),
    ("watson", 2),
    ("box3d", 3),
    ("gaussian", 3),
    ("gulf", 3),
    ("helical_valley", 3),
    ("brown_dennis", 4),
    ("ext_rosenbrock", 4),
    ("ext_powell", 4),
    ("penalty1", 4),
    ("penalty2", 4),
    ("trigonometric", 4),
    ("wood", 4),
    ("biggs_exp6", 6),
    ("chebyquad", 6),
    ("penalty2", 10),
];

/// Large-scale families run at [`LARGE_N`], plus the two MGH extensions.
const LARGE_EXTRA: &[&str] = &["ext_rosenbrock", "ext_powell"];

/// One row of [`list_problems`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub family: &'static str,
    pub n: usize,
    pub class: SizeClass,
}

impl CatalogEntry {
    pub fn label(&self) -> String {
        let info = family(self.family).expect("catalog entries name known families");
        if info.default_n == self.n {
            self.family.to_string()
        } else {
            format!("{}-{}", self.family, self.n)
        }
    }
}

fn family(name: &str) -> Option<&'static FamilyInfo> {
    FAMILIES.iter().find(|f| f.name == name)
}

/// Catalog entries for a size class, in a fixed order.
///
/// `Small` is the Newton benchmark set in benchmark order, `Large` is alphabetical,
/// `All` is small followed by large (labels never repeat).
pub fn catalog(filter: SizeClass) -> Vec<CatalogEntry> {
    let small = || {
        SMALL_SET.iter().map(|&(family, n)| CatalogEntry {
            family,
            n,
            class: SizeClass::Small,
        })
    };
    let large = || {
        let mut v: Vec<CatalogEntry> = FAMILIES
            .iter()
            .filter(|f| matches!(f.family, Family::Large(_)) && f.default_n == LARGE_N)
            .map(|f| f.name)
            .chain(LARGE_EXTRA.iter().copied())
            .map(|family| CatalogEntry {
                family,
                n: LARGE_N,
                class: SizeClass::Large,
            })
            .collect();
        v.sort_by(|a, b| a.family.cmp(b.family));
        v
    };
    match filter {
        SizeClass::Small => small().collect(),
        SizeClass::Large => large(),
        SizeClass::All => small().chain(large()).collect(),
    }
}

/// Problem labels for a size class; see [`catalog`] for the ordering.
pub fn list_problems(filter: SizeClass) -> Vec<String> {
    catalog(filter).iter().map(CatalogEntry::label).collect()
}

/// Every family name, including the two toy problems `rosenbrock2` and `quadratic`.
pub fn family_names() -> Vec<&'static str> {
    FAMILIES.iter().map(|f| f.name).collect()
}

/// Builds a problem by family name or catalog label.
///
/// An explicit `n` overrides any `-<n>` suffix in `name`.
pub fn get_problem(name: &str, n: Option<usize>) -> Result<Problem> {
    let lower = name.to_ascii_lowercase();
    let (base, suffix_n) = match lower.rsplit_once('-') {
        Some((b, d)) if !d.is_empty() && d.bytes().all(|c| c.is_ascii_digit()) => (b, d.parse().ok()),
        _ => (lower.as_str(), None),
    };
    let info = family(base).ok_or_else(|| Error::UnknownProblem(name.to_string()))?;
    let n = n.or(suffix_n).unwrap_or(info.default_n);
    check_dimension(info, n)?;
    let label = if n == info.default_n {
        info.name.to_string()
    } else {
        format!("{}-{}", info.name, n)
    };
    Ok(build(info.family, &label, n))
}

fn check_dimension(info: &FamilyInfo, n: usize) -> Result<()> {
    let bad = |reason| {
        Err(Error::InvalidDimension {
            name: info.name.to_string(),
            n,
            reason,
        })
    };
    match info.family {
        Family::Mgh(kind) => {
            let ok = match kind {
                Mgh::Rosenbrock
                | Mgh::Beale
                | Mgh::BrownBadlyScaled
                | Mgh::PowellBadlyScaled => n == 2,
                Mgh::Box3d | Mgh::Gaussian | Mgh::Gulf | Mgh::HelicalValley => n == 3,
                Mgh::BrownDennis | Mgh::Wood => n == 4,
                Mgh::BiggsExp6 => n == 6,
                Mgh::Watson => (2..=31).contains(&n),
                Mgh::VariablyDimensioned
                | Mgh::Penalty1
                | Mgh::Penalty2
                | Mgh::Trigonometric
                | Mgh::Chebyquad => n >= 1,
            };
            if !ok {
                return bad("dimension not supported by this family");
            }
        }
        Family::Large(kind) => {
            let (div, min) = kind.shape();
            if n < min {
                return bad("dimension below the family minimum");
            }
            if n % div != 0 {
                return bad(match div {
                    2 => "dimension must be even",
                    3 => "dimension must be a multiple of 3",
                    _ => "dimension must be a multiple of 4",
                });
            }
        }
        Family::Quadratic => {
            if n == 0 {
                return bad("dimension must be positive");
            }
        }
    }
    Ok(())
}

fn mgh_x0(kind: Mgh, n: usize) -> Vec<f64> {
    let nf = n as f64;
    match kind {
        Mgh::Rosenbrock => alloc::vec![-1.2, 1.0],
        Mgh::Beale | Mgh::BrownBadlyScaled => alloc::vec![1.0, 1.0],
        Mgh::PowellBadlyScaled => alloc::vec![0.0, 1.0],
        Mgh::VariablyDimensioned => (1..=n).map(|j| 1.0 - j as f64 / nf).collect(),
        Mgh::Watson => alloc::vec![0.0; n],
        Mgh::Box3d => alloc::vec![0.0, 10.0, 20.0],
        Mgh::Gaussian => alloc::vec![0.4, 1.0, 0.0],
        Mgh::Gulf => alloc::vec![5.0, 2.5, 0.15],
        Mgh::HelicalValley => alloc::vec![-1.0, 0.0, 0.0],
        Mgh::BrownDennis => alloc::vec![25.0, 5.0, -5.0, -1.0],
        Mgh::Penalty1 => (1..=n).map(|j| j as f64).collect(),
        Mgh::Penalty2 => alloc::vec![0.5; n],
        Mgh::Trigonometric => alloc::vec![1.0 / nf; n],
        Mgh::Wood => alloc::vec![-3.0, -1.0, -3.0, -1.0],
        Mgh::BiggsExp6 => alloc::vec![1.0, 2.0, 1.0, 1.0, 1.0, 1.0],
        Mgh::Chebyquad => (1..=n).map(|j| j as f64 / (nf + 1.0)).collect(),
    }
}

/// Families whose global minimum value is exactly zero at every supported dimension.
fn mgh_zero_minimum(kind: Mgh, n: usize) -> bool {
    match kind {
        Mgh::Rosenbrock
        | Mgh::Beale
        | Mgh::BrownBadlyScaled
        | Mgh::PowellBadlyScaled
        | Mgh::VariablyDimensioned
        | Mgh::Box3d
        | Mgh::Gulf
        | Mgh::HelicalValley
        | Mgh::Trigonometric
        | Mgh::Wood
        | Mgh::BiggsExp6 => true,
        Mgh::Chebyquad => n <= 7 || n == 9,
        _ => false,
    }
}

fn build(family: Family, label: &str, n: usize) -> Problem {
    match family {
        Family::Mgh(kind) => {
            let p = Problem::new(label, mgh_x0(kind, n), LeastSquares::new(kind, n));
            if mgh_zero_minimum(kind, n) {
                p.with_f_star(0.0)
            } else {
                p
            }
        }
        Family::Large(kind) => {
            let p = Problem::new(label, kind.x0(n), LargeProblem { kind });
            match kind {
                Large::ExtRosenbrock | Large::ExtPowell | Large::Quartc | Large::Dixon3dq => p.with_f_star(0.0),
                _ => p,
            }
        }
        Family::Quadratic => Problem::from_fns(
            label,
            alloc::vec![1.0; n],
            |x| 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
            |x, g| g.copy_from_slice(x),
        )
        .with_hessian(move |_| DMatrix::identity(n, n))
        .with_f_star(0.0),
    }
}
