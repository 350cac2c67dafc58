use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::fock::{partitions, sector_basis, FockState, FockVector, Half, Oscillators, Sector, Truncation};
use crate::scalar::{Deformation, Field, QScalar, Ring};

use super::operator::{FermionPart, FieldError, FieldOperator, FiniteOp};
use super::spec::{ExpFieldSpec, MergedSpec, MAX_VARS};

/// Handle of an interned field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldId(usize);

/// Handle of an interned finite operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpId(usize);

const MAX_MODE: usize = 48;

/// Images of states above this doubled degree are recomputed, not stored.
const MEMO_DEGREE2: i64 = 12;

/// Exponential field with its coefficients in the rescaled boson basis:
/// `exp(Σ c_n a_{-n})` multiplies `α^m` into `cα_n^k/k!` times `α^{m+k}`, and
/// `exp(Σ d_n a_n)` sends `α^m` to `Σ_j C(m, j) dα_n^j α^{m-j}`.
struct CompiledSpec<S> {
    id: usize,
    /// `cpow[n][k] = cα_n^k / k!`
    cpow: Vec<Vec<S>>,
    /// `dpow[n][j] = dα_n^j`
    dpow: Vec<Vec<S>>,
    has_creation: bool,
    has_annihilation: bool,
    shift: i64,
    beta: S,
    beta_inv: S,
    k_power: i64,
}

#[derive(Clone)]
enum Node<S> {
    Exp(Arc<CompiledSpec<S>>),
    Fermion(FermionPart),
    Scaled { inner: FieldId, lambda: S },
    Product(Vec<FieldId>),
    Commutator { field: FieldId, op: OpId, x: S },
    Scalar { c: S, inner: FieldId },
}

#[derive(Clone)]
enum OpNode<S> {
    Mode { field: FieldId, m2: i64 },
    KPower(i64),
    Scalar(S, OpId),
    Product(Vec<OpId>),
}

type Column<S> = Arc<Vec<(Vec<u32>, S)>>;

struct Tables<S> {
    fields: Vec<(Node<S>, i64)>,
    field_ids: FxHashMap<FieldOperator, FieldId>,
    ops: Vec<(OpNode<S>, i64)>,
    op_ids: FxHashMap<FiniteOp, OpId>,
    specs: usize,
}

type Memo<K, V> = Mutex<FxHashMap<K, V>>;

/// Applies fields and finite operators to Fock vectors over one realization
/// of `q`. Every computed piece is exact: nothing is truncated internally,
/// and each memo entry is a pure function of its key.
pub struct FieldEngine<D: Deformation> {
    osc: Oscillators<D>,
    tables: Mutex<Tables<D::Scalar>>,
    components: Memo<(FieldId, FockState, i64), Arc<FockVector<D::Scalar>>>,
    finite: Memo<(OpId, FockState), Arc<FockVector<D::Scalar>>>,
    columns: Memo<(usize, Vec<u32>, i64), Column<D::Scalar>>,
    creations: Memo<(usize, i64), Column<D::Scalar>>,
}

/// Operator-valued Laurent series applied to a vector: exponent `k` of `z`
/// maps to the coefficient vector. Coefficients with `k_min ≤ k ≤ k_max` are
/// complete under the truncation used.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeriesVector<S: Ring> {
    pub terms: BTreeMap<i64, FockVector<S>>,
    pub k_min: i64,
    pub k_max: i64,
}

impl<S: Ring> LaurentSeriesVector<S> {
    pub fn coefficient(&self, k: i64) -> FockVector<S> {
        self.terms.get(&k).cloned().unwrap_or_else(FockVector::zero)
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut acc: i64 = 1;
    for i in 0..k as i64 {
        acc = acc * (n as i64 - i) / (i + 1);
    }
    acc
}

impl<D: Deformation> FieldEngine<D> {
    pub fn new(d: D) -> Self {
        FieldEngine {
            osc: Oscillators::new(d),
            tables: Mutex::new(Tables {
                fields: Vec::new(),
                field_ids: FxHashMap::default(),
                ops: Vec::new(),
                op_ids: FxHashMap::default(),
                specs: 0,
            }),
            components: Mutex::default(),
            finite: Mutex::default(),
            columns: Mutex::default(),
            creations: Mutex::default(),
        }
    }

    /// Drops memoized operator images; compiled coefficient tables are kept.
    pub fn clear_memos(&self) {
        self.components.lock().unwrap().clear();
        self.finite.lock().unwrap().clear();
    }

    pub fn oscillators(&self) -> &Oscillators<D> {
        &self.osc
    }

    pub fn deformation(&self) -> &D {
        self.osc.deformation()
    }

    fn lift(&self, x: &QScalar) -> D::Scalar {
        self.deformation().lift(x)
    }

    fn compile(&self, s: &ExpFieldSpec, id: usize) -> CompiledSpec<D::Scalar> {
        let mut cpow = vec![Vec::new()];
        let mut dpow = vec![Vec::new()];
        for n in 1..=MAX_MODE {
            let q2n = QScalar::from_ratfunc(crate::scalar::q_integer(2 * n as i64));
            let ca = self.lift(&s.creation_coeff(n as i64).mul_ref(&q2n));
            let da = self.lift(&s.annihilation_coeff(n as i64).mul_ref(&q2n).mul_ref(&QScalar::from_ratio(1, n as i64)));
            let kmax = MAX_MODE / n + 1;
            let mut cp = vec![D::Scalar::one()];
            let mut dp = vec![D::Scalar::one()];
            for k in 1..=kmax {
                cp.push(cp[k - 1].mul_ref(&ca).mul_ref(&D::Scalar::from_ratio(1, k as i64)));
                dp.push(dp[k - 1].mul_ref(&da));
            }
            cpow.push(cp);
            dpow.push(dp);
        }
        let beta = self.lift(&s.momentum_base());
        CompiledSpec {
            id,
            cpow,
            dpow,
            has_creation: !s.creation.is_empty(),
            has_annihilation: !s.annihilation.is_empty(),
            shift: s.shift,
            beta_inv: beta.try_inv().expect("nonzero momentum base"),
            beta,
            k_power: s.k_power,
        }
    }

    /// Interns a field and every sub-expression.
    pub fn field(&self, f: &FieldOperator) -> FieldId {
        if let Some(id) = self.tables.lock().unwrap().field_ids.get(f) {
            return *id;
        }
        let node = match f {
            FieldOperator::Exp(s) => {
                let id = {
                    let mut t = self.tables.lock().unwrap();
                    t.specs += 1;
                    t.specs
                };
                Node::Exp(Arc::new(self.compile(s, id)))
            }
            FieldOperator::Fermion(p) => Node::Fermion(*p),
            FieldOperator::Scaled(inner, l) => Node::Scaled { inner: self.field(inner), lambda: self.lift(l) },
            FieldOperator::Product(fs) => Node::Product(fs.iter().map(|g| self.field(g)).collect()),
            FieldOperator::ModeCommutator { field, op, x } => {
                Node::Commutator { field: self.field(field), op: self.op(op), x: self.lift(x) }
            }
            FieldOperator::Scalar(c, inner) => Node::Scalar { c: self.lift(c), inner: self.field(inner) },
        };
        let w2 = f.weight2();
        let mut t = self.tables.lock().unwrap();
        if let Some(id) = t.field_ids.get(f) {
            return *id;
        }
        let id = FieldId(t.fields.len());
        t.fields.push((node, w2));
        t.field_ids.insert(f.clone(), id);
        id
    }

    /// Interns a finite operator.
    pub fn op(&self, o: &FiniteOp) -> OpId {
        if let Some(id) = self.tables.lock().unwrap().op_ids.get(o) {
            return *id;
        }
        let node = match o {
            FiniteOp::Mode { field, m } => OpNode::Mode { field: self.field(field), m2: m.doubled() },
            FiniteOp::KPower(k) => OpNode::KPower(*k),
            FiniteOp::Scalar(c, inner) => OpNode::Scalar(self.lift(c), self.op(inner)),
            FiniteOp::Product(os) => OpNode::Product(os.iter().map(|x| self.op(x)).collect()),
        };
        let mut t = self.tables.lock().unwrap();
        if let Some(id) = t.op_ids.get(o) {
            return *id;
        }
        let id = OpId(t.ops.len());
        t.ops.push((node, o.shift2()));
        t.op_ids.insert(o.clone(), id);
        id
    }

    fn node(&self, f: FieldId) -> (Node<D::Scalar>, i64) {
        self.tables.lock().unwrap().fields[f.0].clone()
    }

    fn op_node(&self, o: OpId) -> (OpNode<D::Scalar>, i64) {
        self.tables.lock().unwrap().ops[o.0].clone()
    }

    /// Doubled weight offset of an interned field.
    pub fn weight2(&self, f: FieldId) -> i64 {
        self.tables.lock().unwrap().fields[f.0].1
    }

    /// Doubled degree shift of an interned finite operator.
    pub fn shift2(&self, o: OpId) -> i64 {
        self.tables.lock().unwrap().ops[o.0].1
    }

    /// The part of `O(z)|s>` that raises the degree by `δ = delta2/2`; it is
    /// the coefficient of `z^{δ - w}`.
    pub fn component(&self, f: FieldId, s: &FockState, delta2: i64) -> Arc<FockVector<D::Scalar>> {
        if s.degree2() > MEMO_DEGREE2 || !matches!(self.node(f).0, Node::Commutator { .. }) {
            return Arc::new(self.compute_component(f, s, delta2));
        }
        let key = (f, s.clone(), delta2);
        if let Some(v) = self.components.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = Arc::new(self.compute_component(f, s, delta2));
        self.components.lock().unwrap().insert(key, v.clone());
        v
    }

    fn compute_component(&self, f: FieldId, s: &FockState, delta2: i64) -> FockVector<D::Scalar> {
        if s.degree2() + delta2 < 0 {
            return FockVector::zero();
        }
        let (node, w2) = self.node(f);
        match node {
            Node::Exp(spec) => self.exp_component(&spec, s, delta2),
            Node::Fermion(part) => self.fermion_component(part, s, delta2),
            Node::Scaled { inner, lambda } => {
                let k2 = delta2 - w2;
                if k2 % 2 != 0 {
                    return FockVector::zero();
                }
                let c = lambda.powi((k2 / 2) as i32).expect("nonzero scale");
                self.component(inner, s, delta2).scale(&c)
            }
            Node::Scalar { c, inner } => self.component(inner, s, delta2).scale(&c),
            Node::Product(fs) => self.product_component(&fs, s, delta2),
            Node::Commutator { field, op, x } => {
                let mu = self.shift2(op);
                let moved = self.apply_op(op, &FockVector::basis(s.clone()));
                let mut out = self.component_vec(field, &moved, delta2 - mu);
                let first = self.component(field, s, delta2 - mu);
                out.add_scaled(&-x, &self.apply_op(op, &first));
                out
            }
        }
    }

    /// `Σ_s v_s · component(f, s, δ)`
    pub fn component_vec(&self, f: FieldId, v: &FockVector<D::Scalar>, delta2: i64) -> FockVector<D::Scalar> {
        let mut out = FockVector::zero();
        for (s, c) in v.iter() {
            out.add_scaled(c, &self.component(f, s, delta2));
        }
        out
    }

    /// Mode `O_m`, mapping degree `Δ` to `Δ - m`.
    pub fn mode(&self, f: FieldId, m: Half, v: &FockVector<D::Scalar>) -> FockVector<D::Scalar> {
        self.component_vec(f, v, -m.doubled())
    }

    fn exp_component(&self, spec: &CompiledSpec<D::Scalar>, s: &FockState, delta2: i64) -> FockVector<D::Scalar> {
        let p = s.momentum();
        let p2 = p + spec.shift;
        let nb2 = s.degree2() + delta2 - s.fermion_degree2() - p2 * p2;
        if nb2 < 0 || nb2 % 2 != 0 {
            return FockVector::zero();
        }
        let n_target = nb2 / 2;
        if !spec.has_creation && n_target > s.boson_degree() || !spec.has_annihilation && n_target < s.boson_degree() {
            return FockVector::zero();
        }
        let col = self.column(spec, s.multiplicities(), n_target);
        let b = if p >= 0 { &spec.beta } else { &spec.beta_inv };
        let mut pref = b.powi(p.unsigned_abs() as i32).expect("nonzero");
        if spec.k_power != 0 {
            pref = pref.mul_ref(&self.deformation().q_pow(2 * spec.k_power * p2));
        }
        let fermions = s.fermions_doubled().to_vec();
        FockVector::from_terms(
            col.iter().map(|(lam, c)| (FockState::from_parts(p2, lam.clone(), fermions.clone()), c.mul_ref(&pref))),
        )
    }

    /// Bosonic matrix column: `exp(creation) exp(annihilation) α^λ` restricted
    /// to boson degree `n_target`.
    fn column(&self, spec: &CompiledSpec<D::Scalar>, lam: &[u32], n_target: i64) -> Column<D::Scalar> {
        let key = (spec.id, lam.to_vec(), n_target);
        if let Some(c) = self.columns.lock().unwrap().get(&key) {
            return c.clone();
        }
        let mut acc: FxHashMap<Vec<u32>, D::Scalar> = FxHashMap::default();
        let mut kept = vec![0u32; lam.len()];
        self.kept_rec(spec, lam, 0, 0, D::Scalar::one(), n_target, &mut kept, &mut acc);
        let mut out: Vec<(Vec<u32>, D::Scalar)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        let out = Arc::new(out);
        self.columns.lock().unwrap().insert(key, out.clone());
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn kept_rec(
        &self,
        spec: &CompiledSpec<D::Scalar>,
        lam: &[u32],
        i: usize,
        kept_deg: i64,
        coef: D::Scalar,
        n_target: i64,
        kept: &mut Vec<u32>,
        acc: &mut FxHashMap<Vec<u32>, D::Scalar>,
    ) {
        if i == lam.len() {
            let creations = self.creation_table(spec, n_target - kept_deg);
            for (mu, c) in creations.iter() {
                let len = kept.len().max(mu.len());
                let mut out = vec![0u32; len];
                for (j, &k) in kept.iter().enumerate() {
                    out[j] += k;
                }
                for (j, &k) in mu.iter().enumerate() {
                    out[j] += k;
                }
                while out.last() == Some(&0) {
                    out.pop();
                }
                let v = coef.mul_ref(c);
                match acc.get_mut(&out) {
                    Some(x) => *x = x.add_ref(&v),
                    None => {
                        acc.insert(out, v);
                    }
                }
            }
            return;
        }
        let n = i + 1;
        let m = lam[i];
        for k in (0..=m).rev() {
            let deg = kept_deg + (n as i64) * k as i64;
            if deg > n_target {
                continue;
            }
            let j = m - k;
            if j > 0 && !spec.has_annihilation {
                break;
            }
            let c = if j == 0 {
                coef.clone()
            } else {
                coef.mul_ref(&spec.dpow[n][j as usize]).mul_ref(&D::Scalar::from_i64(binomial(m, j)))
            };
            if c.is_zero() {
                continue;
            }
            kept[i] = k;
            self.kept_rec(spec, lam, i + 1, deg, c, n_target, kept, acc);
        }
        kept[i] = 0;
    }

    /// `exp(Σ c_n a_{-n})` restricted to added boson degree `r`.
    fn creation_table(&self, spec: &CompiledSpec<D::Scalar>, r: i64) -> Column<D::Scalar> {
        if r < 0 {
            return Arc::new(Vec::new());
        }
        let key = (spec.id, r);
        if let Some(c) = self.creations.lock().unwrap().get(&key) {
            return c.clone();
        }
        let out: Vec<(Vec<u32>, D::Scalar)> = if !spec.has_creation {
            if r == 0 {
                vec![(Vec::new(), D::Scalar::one())]
            } else {
                Vec::new()
            }
        } else {
            partitions(r as usize)
                .into_iter()
                .filter_map(|mu| {
                    let mut c = D::Scalar::one();
                    for (i, &k) in mu.iter().enumerate() {
                        if k > 0 {
                            c = c.mul_ref(&spec.cpow[i + 1][k as usize]);
                        }
                    }
                    (!c.is_zero()).then_some((mu, c))
                })
                .collect()
        };
        let out = Arc::new(out);
        self.creations.lock().unwrap().insert(key, out.clone());
        out
    }

    fn fermion_component(&self, part: FermionPart, s: &FockState, delta2: i64) -> FockVector<D::Scalar> {
        let r2 = -delta2;
        if r2 % 2 == 0 {
            return FockVector::zero();
        }
        let mut t = s.clone();
        if r2 > 0 {
            if part == FermionPart::Creation {
                return FockVector::zero();
            }
            match t.remove_fermion(r2 as u32) {
                Some(sign) => {
                    FockVector::term(t, self.osc.kappa(r2 as usize).mul_ref(&D::Scalar::from_i64(sign)))
                }
                None => FockVector::zero(),
            }
        } else {
            if part == FermionPart::Annihilation {
                return FockVector::zero();
            }
            match t.insert_fermion((-r2) as u32) {
                Some(sign) => FockVector::term(t, D::Scalar::from_i64(sign)),
                None => FockVector::zero(),
            }
        }
    }

    /// How far the field can lower the degree of `s` (doubled), given that
    /// every factor to its right preserves the fermion content.
    fn lowering_cap2(&self, f: FieldId, s: &FockState) -> i64 {
        match self.node(f).0 {
            Node::Fermion(_) => s.fermions_doubled().last().map_or(0, |&r| r as i64),
            Node::Scalar { inner, .. } | Node::Scaled { inner, .. } => self.lowering_cap2(inner, s),
            _ => panic!("only fermionic factors may stand left of another factor in a product"),
        }
    }

    fn product_component(&self, fs: &[FieldId], s: &FockState, delta2: i64) -> FockVector<D::Scalar> {
        match fs {
            [] => {
                if delta2 == 0 {
                    FockVector::basis(s.clone())
                } else {
                    FockVector::zero()
                }
            }
            [f] => (*self.component(*f, s, delta2)).clone(),
            [left, rest @ ..] => {
                let cap = self.lowering_cap2(*left, s);
                let mut out = FockVector::zero();
                for d_rest in -s.degree2()..=delta2 + cap {
                    let mid = if rest.len() == 1 {
                        (*self.component(rest[0], s, d_rest)).clone()
                    } else {
                        self.product_component(rest, s, d_rest)
                    };
                    if mid.is_zero() {
                        continue;
                    }
                    out.add_scaled(&D::Scalar::one(), &self.component_vec(*left, &mid, delta2 - d_rest));
                }
                out
            }
        }
    }

    /// Applies a finite operator.
    pub fn apply_op(&self, o: OpId, v: &FockVector<D::Scalar>) -> FockVector<D::Scalar> {
        let mut out = FockVector::zero();
        for (s, c) in v.iter() {
            out.add_scaled(c, &self.apply_op_state(o, s));
        }
        out
    }

    fn apply_op_state(&self, o: OpId, s: &FockState) -> Arc<FockVector<D::Scalar>> {
        if s.degree2() > MEMO_DEGREE2 {
            return Arc::new(self.compute_op_state(o, s));
        }
        let key = (o, s.clone());
        if let Some(v) = self.finite.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = self.compute_op_state(o, s);
        let v = Arc::new(v);
        self.finite.lock().unwrap().insert(key, v.clone());
        v
    }

    fn compute_op_state(&self, o: OpId, s: &FockState) -> FockVector<D::Scalar> {
        match self.op_node(o).0 {
            OpNode::Mode { field, m2 } => (*self.component(field, s, -m2)).clone(),
            OpNode::KPower(k) => FockVector::term(s.clone(), self.deformation().q_pow(2 * k * s.momentum())),
            OpNode::Scalar(c, inner) => self.apply_op_state(inner, s).scale(&c),
            OpNode::Product(os) => {
                let mut v = FockVector::basis(s.clone());
                for x in os.iter().rev() {
                    v = self.apply_op(*x, &v);
                }
                v
            }
        }
    }

    /// `O(z)v` for all target degrees up to the truncation.
    pub fn apply_field(&self, f: FieldId, v: &FockVector<D::Scalar>, t: &Truncation) -> LaurentSeriesVector<D::Scalar> {
        let w2 = self.weight2(f);
        let max2 = t.max_degree.doubled();
        let mut terms: BTreeMap<i64, FockVector<D::Scalar>> = BTreeMap::new();
        let (mut k_min, mut k_max) = (i64::MAX, i64::MAX);
        for (s, c) in v.iter() {
            k_min = k_min.min((-s.degree2() - w2).div_euclid(2));
            k_max = k_max.min((max2 - s.degree2() - w2).div_euclid(2));
            for target in 0..=max2 {
                let delta2 = target - s.degree2();
                if (delta2 - w2) % 2 != 0 {
                    continue;
                }
                let comp = self.component(f, s, delta2);
                let comp = comp.filter(|u| t.contains(u));
                if comp.is_zero() {
                    continue;
                }
                terms.entry((delta2 - w2) / 2).or_insert_with(FockVector::zero).add_scaled(c, &comp);
            }
        }
        terms.retain(|_, x| !x.is_zero());
        if v.is_zero() {
            k_min = 0;
            k_max = 0;
        }
        LaurentSeriesVector { terms, k_min, k_max }
    }

    /// The matrix of `O_m` on one sector, one column per basis state.
    pub fn mode_block(&self, f: FieldId, m: Half, sector: Sector, t: &Truncation) -> Result<SectorBlock<D::Scalar>, FieldError> {
        let basis = sector_basis(sector);
        let target = sector.degree - m;
        if target < Half::ZERO || target > t.max_degree {
            return Err(FieldError::OutOfWindow {
                field: format!("{f:?}"),
                mode: m.to_string(),
                state: basis.first().map(|s| s.to_string()).unwrap_or_default(),
            });
        }
        let columns = basis.iter().map(|s| (*self.component(f, s, -m.doubled())).clone()).collect();
        Ok(SectorBlock { source: sector, basis, columns })
    }

    /// Two-variable normal-ordered exponential applied to a state: a list of
    /// `(target, [exponent of z_0, exponent of z_1], coefficient)`, targets of
    /// doubled degree at most `bound2`.
    pub fn apply_merged(&self, m: &MergedSpec, s: &FockState, bound2: i64) -> Vec<(FockState, [i64; MAX_VARS], D::Scalar)> {
        let d = self.deformation();
        let lam = s.multiplicities();
        type Poly2<S> = Vec<([i64; MAX_VARS], S)>;
        let mul = |a: &Poly2<D::Scalar>, b: &Poly2<D::Scalar>| -> Poly2<D::Scalar> {
            let mut acc: BTreeMap<[i64; MAX_VARS], D::Scalar> = BTreeMap::new();
            for (ea, ca) in a {
                for (eb, cb) in b {
                    let e = [ea[0] + eb[0], ea[1] + eb[1]];
                    let v = ca.mul_ref(cb);
                    let x = acc.entry(e).or_insert_with(D::Scalar::zero);
                    *x = x.add_ref(&v);
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        };
        let coeff = |terms: &[(usize, super::spec::CoeffTerm)], n: i64, var: usize| -> QScalar {
            terms.iter().filter(|(v, _)| *v == var).fold(QScalar::zero(), |a, (_, t)| a.add_ref(&t.value(n)))
        };
        let q2n = |n: i64| QScalar::from_ratfunc(crate::scalar::q_integer(2 * n));
        // linear form Σ_var x_var z_var^{sign·n} raised to the power k, divided by k! if asked
        let power = |xs: [D::Scalar; MAX_VARS], n: i64, sign: i64, k: u32, factorial: bool| -> Poly2<D::Scalar> {
            let mut p: Poly2<D::Scalar> = vec![([0; MAX_VARS], D::Scalar::one())];
            let lin: Poly2<D::Scalar> = (0..MAX_VARS)
                .filter(|&v| !xs[v].is_zero())
                .map(|v| {
                    let mut e = [0; MAX_VARS];
                    e[v] = sign * n;
                    (e, xs[v].clone())
                })
                .collect();
            for i in 1..=k {
                p = mul(&p, &lin);
                if factorial {
                    let f = D::Scalar::from_ratio(1, i as i64);
                    p = p.into_iter().map(|(e, c)| (e, c.mul_ref(&f))).collect();
                }
            }
            p
        };
        // annihilation: kept multisets with their Laurent coefficients in z
        let mut kept_list: Vec<(Vec<u32>, Poly2<D::Scalar>)> = vec![(Vec::new(), vec![([0; MAX_VARS], D::Scalar::one())])];
        for (i, &mult) in lam.iter().enumerate() {
            let n = i as i64 + 1;
            let da: [D::Scalar; MAX_VARS] = std::array::from_fn(|v| {
                self.lift(&coeff(&m.annihilation, n, v).mul_ref(&q2n(n)).mul_ref(&QScalar::from_ratio(1, n)))
            });
            let mut next = Vec::new();
            for (kv, poly) in &kept_list {
                for k in 0..=mult {
                    let j = mult - k;
                    let pj = power(da.clone(), n, -1, j, false);
                    if pj.is_empty() {
                        continue;
                    }
                    let b = D::Scalar::from_i64(binomial(mult, j));
                    let pj: Poly2<D::Scalar> = pj.into_iter().map(|(e, c)| (e, c.mul_ref(&b))).collect();
                    let mut kv2 = kv.clone();
                    kv2.push(k);
                    next.push((kv2, mul(poly, &pj)));
                }
            }
            kept_list = next;
        }
        let p = s.momentum();
        let p2 = p + m.shift;
        let budget2 = bound2 - s.fermion_degree2() - p2 * p2;
        let mut pref: Poly2<D::Scalar> = vec![([0; MAX_VARS], D::Scalar::one())];
        for (var, beta, eps) in &m.momentum {
            let b = self.lift(beta).powi(p as i32).expect("nonzero");
            let mut e = [0; MAX_VARS];
            e[*var] = eps * p;
            pref = mul(&pref, &vec![(e, b)]);
        }
        if m.k_power != 0 {
            let k = d.q_pow(2 * m.k_power * p2);
            pref = pref.into_iter().map(|(e, c)| (e, c.mul_ref(&k))).collect();
        }
        let mut out: BTreeMap<(FockState, [i64; MAX_VARS]), D::Scalar> = BTreeMap::new();
        for (kv, apoly) in kept_list {
            let kept_deg: i64 = kv.iter().enumerate().map(|(i, &k)| (i as i64 + 1) * k as i64).sum();
            if budget2 < 2 * kept_deg {
                continue;
            }
            let room = (budget2 / 2 - kept_deg) as usize;
            for r in 0..=room {
                for mu in partitions(r) {
                    let mut poly = apoly.clone();
                    for (i, &k) in mu.iter().enumerate() {
                        if k == 0 {
                            continue;
                        }
                        let n = i as i64 + 1;
                        let ca: [D::Scalar; MAX_VARS] =
                            std::array::from_fn(|v| self.lift(&coeff(&m.creation, n, v).mul_ref(&q2n(n))));
                        poly = mul(&poly, &power(ca, n, 1, k, true));
                    }
                    if poly.is_empty() {
                        continue;
                    }
                    poly = mul(&poly, &pref);
                    let len = kv.len().max(mu.len());
                    let mut lam2 = vec![0u32; len];
                    for (j, &k) in kv.iter().enumerate() {
                        lam2[j] += k;
                    }
                    for (j, &k) in mu.iter().enumerate() {
                        lam2[j] += k;
                    }
                    let u = FockState::from_parts(p2, lam2, s.fermions_doubled().to_vec());
                    for (e, c) in poly {
                        let x = out.entry((u.clone(), e)).or_insert_with(D::Scalar::zero);
                        *x = x.add_ref(&c);
                    }
                }
            }
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).map(|((u, e), c)| (u, e, c)).collect()
    }
}

/// Matrix of an operator on one sector: `columns[i]` is the image of
/// `basis[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorBlock<S: Ring> {
    pub source: Sector,
    pub basis: Vec<FockState>,
    pub columns: Vec<FockVector<S>>,
}

impl<S: Ring> SectorBlock<S> {
    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{qint, Gen};
    use crate::fields::{build_normal, normal_ordered_merge};
    use crate::scalar::Symbolic;

    fn st(p: i64, a: &[i64], b: &[&str]) -> FockState {
        let b: Vec<Half> = b.iter().map(|x| x.parse().unwrap()).collect();
        FockState::new(p, a, &b).unwrap()
    }

    fn engine() -> FieldEngine<Symbolic> {
        FieldEngine::new(Symbolic)
    }

    #[test]
    fn phi_1_on_vacuum() {
        let e = engine();
        let f = e.field(&build_normal("phi_1"));
        let s = e.apply_field(f, &FockVector::basis(FockState::vacuum()), &Truncation::new(Half::int(3)));
        assert_eq!(s.coefficient(0), FockVector::basis(FockState::charged(1)));
        let c1 = s.coefficient(1);
        let a1 = st(1, &[1], &[]);
        // plain coefficient q^5/[2] is q^5 in the rescaled basis
        assert_eq!(c1.coefficient_of(&a1), QScalar::q_pow(5));
        let plain = e.oscillators().plain_coefficient(&c1, &a1);
        assert_eq!(plain, QScalar::q_pow(5).mul_ref(&qint(2).inv().unwrap()));
        assert_eq!(c1.len(), 1);
    }

    #[test]
    fn current_on_vacuum() {
        let e = engine();
        let f = e.field(&build_normal("X+"));
        let s = e.apply_field(f, &FockVector::basis(FockState::vacuum()), &Truncation::new(Half::int(3)));
        let r2 = QScalar::sqrt2();
        assert_eq!(s.coefficient(0), FockVector::term(st(1, &[], &["1/2"]), r2.clone()));
        assert!(s.coefficient(-1).is_zero());
        let c1 = s.coefficient(1);
        assert_eq!(c1.coefficient_of(&st(1, &[], &["3/2"])), r2);
        let plain = e.oscillators().plain_coefficient(&c1, &st(1, &[1], &["1/2"]));
        assert_eq!(plain, r2.mul_ref(&QScalar::q_pow(-1)).mul_ref(&qint(2).inv().unwrap()));
    }

    #[test]
    fn chevalley_on_vacuum() {
        let e = engine();
        let vac = FockVector::basis(FockState::vacuum());
        assert!(e.apply_op(e.op(&FiniteOp::chevalley(Gen::E1)), &vac).is_zero());
        assert!(e.apply_op(e.op(&FiniteOp::chevalley(Gen::E0)), &vac).is_zero());
        let f0 = e.apply_op(e.op(&FiniteOp::chevalley(Gen::F0)), &vac);
        let want = FockVector::term(st(1, &[], &["1/2"]), QScalar::sqrt2().mul_ref(&QScalar::q_pow(2)));
        assert_eq!(f0, want);
    }

    #[test]
    fn k_conjugation_of_e1() {
        let e = engine();
        let e1 = e.op(&FiniteOp::chevalley(Gen::E1));
        let k = e.op(&FiniteOp::KPower(1));
        let kinv = e.op(&FiniteOp::KPower(-1));
        let t = Truncation::new(Half::int(3));
        for s in crate::fock::enumerate_basis(&t) {
            let v = FockVector::basis(s);
            let lhs = e.apply_op(k, &e.apply_op(e1, &e.apply_op(kinv, &v)));
            let rhs = e.apply_op(e1, &v).scale(&QScalar::q_pow(2));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn merged_matches_sequential_for_one_field() {
        let e = engine();
        let spec = ExpFieldSpec::phi_1();
        let f = e.field(&FieldOperator::Exp(spec.clone()));
        let m = MergedSpec::single(&spec);
        for s in crate::fock::enumerate_basis(&Truncation::new(Half::int(2))) {
            let merged = e.apply_merged(&m, &s, 8);
            for (u, ex, c) in merged {
                let k2 = u.degree2() - s.degree2() - 1;
                assert_eq!(2 * ex[0], k2, "homogeneity at {s} -> {u}");
                assert_eq!(ex[1], 0);
                assert_eq!(e.component(f, &s, u.degree2() - s.degree2()).coefficient_of(&u), c);
            }
        }
    }

    #[test]
    fn merged_pair_on_vacuum() {
        let e = engine();
        let one = QScalar::from_ratio(1, 1);
        let m = normal_ordered_merge(&[(ExpFieldSpec::phi_1(), 0, one.clone()), (ExpFieldSpec::phi_1(), 1, one)]);
        let out = e.apply_merged(&m, &FockState::vacuum(), 8);
        let lead: Vec<_> = out.iter().filter(|(_, ex, _)| *ex == [0, 0]).collect();
        assert_eq!(lead.len(), 1);
        assert_eq!(lead[0].0, FockState::charged(2));
        assert!(lead[0].2.is_one());
    }
}
