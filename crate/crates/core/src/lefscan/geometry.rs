use crate::error::{Error, Result};

use super::gf::{Extension, FiniteField, GaloisField, Gfe};
use super::poly::{HomogeneousPolynomial, Jet};

/// Row echelon form in place; returns pivot columns.
fn eliminate(f: &GaloisField, rows: &mut [Vec<Gfe>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for k in 0..rows.len() {
            if k != r && !rows[k][c].is_zero() {
                let factor = rows[k][c];
                for j in 0..ncols {
                    let v = f.mul(factor, rows[r][j]);
                    rows[k][j] = f.sub(rows[k][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(f: &GaloisField, rows: &[Vec<Gfe>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    eliminate(f, &mut rows.to_vec(), ncols).len()
}

/// Basis of `{v : rows · v = 0}`.
pub fn kernel(f: &GaloisField, rows: &[Vec<Gfe>], ncols: usize) -> Vec<Vec<Gfe>> {
    let mut m = rows.to_vec();
    let pivots = eliminate(f, &mut m, ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Gfe::ZERO; ncols];
            v[free] = Gfe::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[r][free]);
            }
            v
        })
        .collect()
}

/// Some `λ` with `Σ λ_i rows_i = target`.
pub fn solve_combination(f: &GaloisField, rows: &[Vec<Gfe>], target: &[Gfe]) -> Option<Vec<Gfe>> {
    let k = rows.len();
    let mut aug: Vec<Vec<Gfe>> = (0..target.len())
        .map(|j| {
            rows.iter()
                .map(|r| r[j])
                .chain(std::iter::once(target[j]))
                .collect()
        })
        .collect();
    let pivots = eliminate(f, &mut aug, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut lambda = vec![Gfe::ZERO; k];
    for (r, &pc) in pivots.iter().enumerate() {
        lambda[pc] = aug[r][k];
    }
    Some(lambda)
}

/// Rank of `B` restricted to `ker J`, together with `dim ker J`.
///
/// This is the Lagrangian test for a critical point of `h` on `{g = 0}`: `B` is
/// `Hess h - Σ λ_i Hess g_i` with `dh = Σ λ_i dg_i`, all in affine coordinates.
pub fn restricted_hessian_rank(
    f: &GaloisField,
    jac: &[Vec<Gfe>],
    b: &[Vec<Gfe>],
) -> (usize, usize) {
    let n = b.len();
    let basis = if jac.is_empty() {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Gfe::ONE } else { Gfe::ZERO })
                    .collect()
            })
            .collect()
    } else {
        kernel(f, jac, n)
    };
    let bk: Vec<Vec<Gfe>> = basis
        .iter()
        .map(|v| {
            (0..n)
                .map(|i| f.sum((0..n).map(|j| f.mul(b[i][j], v[j]))))
                .collect()
        })
        .collect();
    let gram: Vec<Vec<Gfe>> = basis
        .iter()
        .map(|u| {
            bk.iter()
                .map(|w| f.sum(u.iter().zip(w).map(|(&a, &c)| f.mul(a, c))))
                .collect()
        })
        .collect();
    (rank(f, &gram), basis.len())
}

/// `X = V(g_1 ⋯ g_s) ⊂ P^N` over `F_q`.
#[derive(Clone, Debug)]
pub struct Arrangement {
    field: FiniteField,
    components: Vec<HomogeneousPolynomial>,
}

impl Arrangement {
    pub fn new(field: FiniteField, components: Vec<HomogeneousPolynomial>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidPolynomial(
                "arrangement without components".into(),
            ));
        };
        let nvars = first.nvars();
        if nvars < 2 || components.iter().any(|g| g.nvars() != nvars) {
            return Err(Error::InvalidPolynomial(
                "components must share at least 2 homogeneous variables".into(),
            ));
        }
        if components.iter().any(|g| g.degree() == 0) {
            return Err(Error::InvalidPolynomial("constant component".into()));
        }
        Ok(Arrangement { field, components })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn components(&self) -> &[HomogeneousPolynomial] {
        &self.components
    }

    /// `N` in `P^N`.
    pub fn ambient_dim(&self) -> usize {
        self.components[0].nvars() - 1
    }

    pub fn nvars(&self) -> usize {
        self.components[0].nvars()
    }

    /// Every component is `g_i`, scaled by `c_i`.
    pub fn rescaled(&self, c: &[u32]) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .zip(c)
            .map(|(g, &ci)| g.scaled(&self.field, ci))
            .collect::<Result<_>>()?;
        Self::new(self.field.clone(), comps)
    }
}

/// Two linearly independent forms of the same degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    pub f0: HomogeneousPolynomial,
    pub f1: HomogeneousPolynomial,
}

impl Pencil {
    pub fn new(
        field: &FiniteField,
        f0: HomogeneousPolynomial,
        f1: HomogeneousPolynomial,
    ) -> Result<Self> {
        if f0.nvars() != f1.nvars() {
            return Err(Error::DegeneratePencil(
                "members in different numbers of variables".into(),
            ));
        }
        if f0.degree() != f1.degree() {
            return Err(Error::DegeneratePencil(format!(
                "degrees {} and {} differ",
                f0.degree(),
                f1.degree()
            )));
        }
        if f0.proportional(&f1, field) {
            return Err(Error::DegeneratePencil("F0 and F1 are proportional".into()));
        }
        Ok(Pencil { f0, f1 })
    }

    pub fn degree(&self) -> u32 {
        self.f0.degree()
    }
}

/// A point of `P^N(F_{q^e})` normalized so its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub coords: Vec<Gfe>,
}

impl Point {
    /// Rescales so that the first nonzero coordinate is 1.
    pub fn normalized(f: &GaloisField, coords: Vec<Gfe>) -> Option<Self> {
        let lead = *coords.iter().find(|c| !c.is_zero())?;
        let inv = f.inv(lead);
        Some(Point {
            coords: coords.into_iter().map(|c| f.mul(c, inv)).collect(),
        })
    }

    pub fn encodings(&self, f: &GaloisField) -> Vec<u32> {
        self.coords.iter().map(|&c| f.encoding(c)).collect()
    }

    pub fn first_nonzero(&self) -> usize {
        self.coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("projective point")
    }
}

/// `φ(x) = [F0(x) : F1(x)]`: `Finite(t)` is `t = F0/F1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PencilValue {
    Finite(Gfe),
    Infinity,
}

/// A critical point with both nondegeneracy conditions evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalRecord {
    /// Degree of the extension `F_{q^e}` the point was found in.
    pub e: u32,
    /// Coordinates as `F_{q^e}` encodings.
    pub point: Vec<u32>,
    /// 0-based indices of the components through the point.
    pub stratum: Vec<usize>,
    pub value: PencilValue,
    /// Encoding of the finite value, if any.
    pub value_encoding: Option<u32>,
    /// Minimal polynomial of the value over `F_q`; empty for infinity.
    pub value_minpoly: Vec<u32>,
    /// `dim T_x Z`.
    pub tangent_dim: usize,
    pub hessian_rank: usize,
    /// Condition (1): the restricted Hessian is nonsingular.
    pub morse: bool,
    /// Condition (2): `φ` is smooth at `x` on every larger stratum.
    pub smooth_on_larger_strata: bool,
    pub nondegenerate: bool,
}

/// The arrangement (and optionally a pencil) compiled over one `F_{q^e}`.
#[derive(Clone, Debug)]
pub struct PencilGeometry {
    base: FiniteField,
    ext: Extension,
    components: Vec<Jet>,
    pencil: Option<(Jet, Jet)>,
}

impl PencilGeometry {
    pub fn new(arr: &Arrangement, ext: Extension) -> Self {
        let base = arr.field().clone();
        let components = arr
            .components()
            .iter()
            .map(|g| Jet::new(g, &base, &ext))
            .collect();
        PencilGeometry {
            base,
            ext,
            components,
            pencil: None,
        }
    }

    pub fn with_pencil(arr: &Arrangement, pencil: &Pencil, ext: Extension) -> Result<Self> {
        if pencil.f0.nvars() != arr.nvars() {
            return Err(Error::DegeneratePencil(
                "pencil and arrangement live in different spaces".into(),
            ));
        }
        let mut g = Self::new(arr, ext);
        g.set_pencil(pencil);
        Ok(g)
    }

    pub(crate) fn set_pencil(&mut self, pencil: &Pencil) {
        self.pencil = Some((
            Jet::new(&pencil.f0, &self.base, &self.ext),
            Jet::new(&pencil.f1, &self.base, &self.ext),
        ));
    }

    pub fn field(&self) -> &GaloisField {
        self.ext.field()
    }

    pub fn extension(&self) -> &Extension {
        &self.ext
    }

    fn pencil(&self) -> &(Jet, Jet) {
        self.pencil
            .as_ref()
            .expect("geometry compiled without a pencil")
    }

    /// Point from `F_{q^e}` encodings.
    pub fn point(&self, encodings: &[u32]) -> Result<Point> {
        let f = self.field();
        if encodings.len() != self.components[0].grad.len() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates",
                encodings.len()
            )));
        }
        let coords = encodings
            .iter()
            .map(|&v| f.from_encoding(v))
            .collect::<Result<Vec<_>>>()?;
        Point::normalized(f, coords)
            .ok_or_else(|| Error::InvalidField("all coordinates are zero".into()))
    }

    /// `{i : g_i(x) = 0}`.
    pub fn stratum_of(&self, x: &Point) -> Result<Vec<usize>> {
        let f = self.field();
        let idx: Vec<usize> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, g)| g.value.eval(f, &x.coords).is_zero())
            .map(|(i, _)| i)
            .collect();
        if idx.is_empty() {
            Err(Error::NotOnVariety)
        } else {
            Ok(idx)
        }
    }

    fn jacobian(&self, x: &Point, idx: &[usize]) -> Vec<Vec<Gfe>> {
        idx.iter()
            .map(|&i| self.components[i].gradient_at(self.field(), &x.coords))
            .collect()
    }

    /// The differentials `dg_i(x)`, `i ∈ I`, are linearly independent.
    pub fn check_snc(&self, x: &Point) -> Result<bool> {
        let idx = self.stratum_of(x)?;
        Ok(self.snc_at(x, &idx))
    }

    pub(crate) fn snc_at(&self, x: &Point, idx: &[usize]) -> bool {
        rank(self.field(), &self.jacobian(x, idx)) == idx.len()
    }

    /// `(F0(x), F1(x))`.
    pub fn pencil_values(&self, x: &Point) -> (Gfe, Gfe) {
        let (a, b) = self.pencil();
        (
            a.value.eval(self.field(), &x.coords),
            b.value.eval(self.field(), &x.coords),
        )
    }

    pub fn in_base_locus(&self, x: &Point) -> bool {
        let (a, b) = self.pencil_values(x);
        a.is_zero() && b.is_zero()
    }

    /// For `x ∈ A ∩ X`: `rank [Jac g_I; dF0; dF1] = |I| + 2`.
    pub fn base_transversality(&self, x: &Point) -> Result<bool> {
        let idx = self.stratum_of(x)?;
        if !self.in_base_locus(x) {
            return Err(Error::InvalidField("point is not in the base locus".into()));
        }
        Ok(self.base_transversal_at(x, &idx))
    }

    pub(crate) fn base_transversal_at(&self, x: &Point, idx: &[usize]) -> bool {
        let f = self.field();
        let (a, b) = self.pencil();
        let mut rows = self.jacobian(x, idx);
        rows.push(a.gradient_at(f, &x.coords));
        rows.push(b.gradient_at(f, &x.coords));
        rank(f, &rows) == idx.len() + 2
    }

    /// `dh_x(x)` for `h_x = F1(x) F0 - F0(x) F1`.
    fn dh(&self, x: &Point) -> Vec<Gfe> {
        let f = self.field();
        let (a, b) = self.pencil();
        let (va, vb) = self.pencil_values(x);
        let (ga, gb) = (a.gradient_at(f, &x.coords), b.gradient_at(f, &x.coords));
        ga.iter()
            .zip(&gb)
            .map(|(&u, &v)| f.sub(f.mul(vb, u), f.mul(va, v)))
            .collect()
    }

    /// For `x ∈ X \ A`: `rank [Jac g_I; dh_x] <= |I|`.
    pub fn is_critical(&self, x: &Point) -> Result<bool> {
        let idx = self.stratum_of(x)?;
        if self.in_base_locus(x) {
            return Err(Error::InvalidField("point lies in the base locus".into()));
        }
        Ok(self.critical_at(x, &idx))
    }

    pub(crate) fn critical_at(&self, x: &Point, idx: &[usize]) -> bool {
        let mut rows = self.jacobian(x, idx);
        rows.push(self.dh(x));
        rank(self.field(), &rows) <= idx.len()
    }

    /// Evaluates both nondegeneracy conditions in the chart of the first nonzero coordinate.
    pub fn nondegenerate(&self, x: &Point) -> Result<CriticalRecord> {
        self.nondegenerate_in_chart(x, x.first_nonzero())
    }

    /// Same, dehomogenizing at coordinate `chart` (which must be nonzero at `x`).
    pub fn nondegenerate_in_chart(&self, x: &Point, chart: usize) -> Result<CriticalRecord> {
        let f = self.field();
        let idx = self.stratum_of(x)?;
        if self.in_base_locus(x) || !self.critical_at(x, &idx) {
            return Err(Error::NotCritical);
        }
        if x.coords.get(chart).is_none_or(|c| c.is_zero()) {
            return Err(Error::InvalidField(format!(
                "coordinate {chart} vanishes at the point"
            )));
        }
        let inv = f.inv(x.coords[chart]);
        let y: Vec<Gfe> = x.coords.iter().map(|&c| f.mul(c, inv)).collect();
        let drop = |v: Vec<Gfe>| -> Vec<Gfe> {
            v.into_iter()
                .enumerate()
                .filter(|&(j, _)| j != chart)
                .map(|(_, c)| c)
                .collect()
        };
        let drop2 = |m: Vec<Vec<Gfe>>| -> Vec<Vec<Gfe>> {
            m.into_iter()
                .enumerate()
                .filter(|&(i, _)| i != chart)
                .map(|(_, r)| drop(r))
                .collect()
        };

        let (a, b) = self.pencil();
        let (va, vb) = (a.value.eval(f, &y), b.value.eval(f, &y));
        let jac: Vec<Vec<Gfe>> = idx
            .iter()
            .map(|&i| drop(self.components[i].gradient_at(f, &y)))
            .collect();
        let (ga, gb) = (a.gradient_at(f, &y), b.gradient_at(f, &y));
        let dh: Vec<Gfe> = drop(
            ga.iter()
                .zip(&gb)
                .map(|(&u, &v)| f.sub(f.mul(vb, u), f.mul(va, v)))
                .collect(),
        );
        let (ha, hb) = (drop2(a.hessian_at(f, &y)), drop2(b.hessian_at(f, &y)));
        let n = ha.len();
        let Some(lambda) = solve_combination(f, &jac, &dh) else {
            // Only possible where the dg_i are dependent: the stratum is singular at x.
            let tangent_dim = n - rank(f, &jac);
            return Ok(self.record(x, idx, tangent_dim, 0, false, false));
        };
        let mut bmat: Vec<Vec<Gfe>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| f.sub(f.mul(vb, ha[i][j]), f.mul(va, hb[i][j])))
                    .collect()
            })
            .collect();
        for (&i, &l) in idx.iter().zip(&lambda) {
            if l.is_zero() {
                continue;
            }
            let hg = drop2(self.components[i].hessian_at(f, &y));
            for r in 0..n {
                for c in 0..n {
                    bmat[r][c] = f.sub(bmat[r][c], f.mul(l, hg[r][c]));
                }
            }
        }
        let (hessian_rank, tangent_dim) = restricted_hessian_rank(f, &jac, &bmat);
        let morse = hessian_rank == tangent_dim;

        let full_dh = self.dh(x);
        let smooth_on_larger_strata = (1..(1u32 << idx.len()) - 1).all(|mask| {
            let sub: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|(t, _)| mask & (1 << t) != 0)
                .map(|(_, &i)| i)
                .collect();
            let mut rows = self.jacobian(x, &sub);
            rows.push(full_dh.clone());
            rank(f, &rows) == sub.len() + 1
        });

        Ok(self.record(
            x,
            idx,
            tangent_dim,
            hessian_rank,
            morse,
            smooth_on_larger_strata,
        ))
    }

    fn record(
        &self,
        x: &Point,
        stratum: Vec<usize>,
        tangent_dim: usize,
        hessian_rank: usize,
        morse: bool,
        smooth_on_larger_strata: bool,
    ) -> CriticalRecord {
        let f = self.field();
        let (va, vb) = self.pencil_values(x);
        let value = if vb.is_zero() {
            PencilValue::Infinity
        } else {
            PencilValue::Finite(f.div(va, vb))
        };
        let (value_encoding, value_minpoly) = match value {
            PencilValue::Infinity => (None, Vec::new()),
            PencilValue::Finite(t) => (Some(f.encoding(t)), self.ext.minimal_polynomial(t)),
        };
        CriticalRecord {
            e: self.ext.e(),
            point: x.encodings(f),
            stratum,
            value,
            value_encoding,
            value_minpoly,
            tangent_dim,
            hessian_rank,
            morse,
            smooth_on_larger_strata,
            nondegenerate: morse && smooth_on_larger_strata,
        }
    }
}
