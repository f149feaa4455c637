//! Serializable documents for reports. Field order is fixed so that
//! serialized output is byte-stable.

use serde::Serialize;

use crate::bigrading::AlmostComplexStructure;
use crate::conditions::{DolbeaultSpace, IntegralValue, MetricReport, ObstructionCertificate, Verdict};
use crate::form::{Frame, InvariantForm};
use crate::hermitian::{HarmonicBasis, L2Value};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Flags {
    pub almost_kahler: Verdict,
    pub balanced: Verdict,
    pub skt: Verdict,
    pub gauduchon: Verdict,
    pub strongly_gauduchon: Verdict,
    pub integral_condition: Verdict,
    pub orthogonality: Verdict,
}

impl Flags {
    pub fn of(r: &MetricReport) -> Self {
        Flags {
            almost_kahler: r.almost_kahler,
            balanced: r.balanced,
            skt: r.skt,
            gauduchon: r.gauduchon.verdict,
            strongly_gauduchon: r.strongly_gauduchon.verdict,
            integral_condition: r.integral_condition.verdict,
            orthogonality: r.orthogonality.verdict,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralRow {
    pub eta: String,
    pub integrand: String,
    /// `c Vol`, `0`, or `undetermined`.
    pub value: String,
    pub method: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeeRow {
    pub theta: String,
    pub d_star_theta: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HpqRow {
    pub p: usize,
    pub q: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricDocument {
    pub engine_version: &'static str,
    pub manifold: String,
    pub metric: String,
    pub seed: Option<u64>,
    pub integrable: bool,
    pub flags: Flags,
    pub d_omega: String,
    pub del_omega: String,
    pub del_delbar_omega_n1: String,
    pub gauduchon_formal: bool,
    pub del_omega_n1: String,
    pub strongly_gauduchon_witness: Option<String>,
    pub harmonic_01: Vec<String>,
    pub integral_condition: Vec<IntegralRow>,
    pub del_star_omega: String,
    pub orthogonality_pairings: Vec<String>,
    pub lee_form: Option<LeeRow>,
    pub hpq_invariant: Vec<HpqRow>,
    pub notes: Vec<String>,
    pub invariant_violations: Vec<String>,
}

pub fn render_l2(v: &L2Value, frame: Frame) -> String {
    match v {
        L2Value::Exact(c) => format!("{} Vol", c),
        L2Value::RequiresGlobalIntegration(f) => format!("integral of ({}) vol_0, requires global integration", f.render(&frame)),
    }
}

impl MetricDocument {
    pub fn new(manifold: &str, metric: &str, seed: Option<u64>, acs: &AlmostComplexStructure, r: &MetricReport) -> Self {
        let frame = acs.frame();
        let flags = Flags::of(r);
        let integral_condition = r
            .integral_condition
            .entries
            .iter()
            .map(|e| {
                let (value, method) = match &e.value {
                    IntegralValue::Exact(c) => (format!("{} Vol", c), "constant density"),
                    IntegralValue::FormalZero => ("0".to_string(), "vanishes identically"),
                    IntegralValue::ExactDifferential(_) => ("0".to_string(), "exact integrand"),
                    IntegralValue::Undetermined(_) => ("undetermined".to_string(), "no primitive at bounded order"),
                };
                IntegralRow { eta: e.eta.render(), integrand: e.integrand.render(&frame), value, method }
            })
            .collect();
        MetricDocument {
            engine_version: ENGINE_VERSION,
            manifold: manifold.to_string(),
            metric: metric.to_string(),
            seed,
            integrable: acs.is_integrable(),
            flags,
            d_omega: r.d_omega.render(),
            del_omega: r.del_omega.render(),
            del_delbar_omega_n1: r.gauduchon.value.render(),
            gauduchon_formal: r.gauduchon.formal,
            del_omega_n1: r.strongly_gauduchon.target.render(),
            strongly_gauduchon_witness: r.strongly_gauduchon.witness.as_ref().map(InvariantForm::render),
            harmonic_01: r.harmonic_01.forms.iter().map(InvariantForm::render).collect(),
            integral_condition,
            del_star_omega: r.orthogonality.del_star_omega.render(),
            orthogonality_pairings: r.orthogonality.pairings.iter().map(|p| render_l2(p, frame)).collect(),
            lee_form: r.lee.as_ref().map(|l| LeeRow { theta: l.theta.render(), d_star_theta: l.d_star_theta.to_string() }),
            hpq_invariant: r.hpq.iter().map(|&((p, q), dimension)| HpqRow { p, q, dimension }).collect(),
            notes: r.notes.clone(),
            invariant_violations: r.invariant_violations(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HarmonicDocument {
    pub engine_version: &'static str,
    pub manifold: String,
    pub metric: String,
    pub p: usize,
    pub q: usize,
    pub dimension: usize,
    pub basis: Vec<String>,
    pub label: &'static str,
    pub dolbeault_dimension: Option<usize>,
}

impl HarmonicDocument {
    pub fn new(manifold: &str, metric: &str, h: &HarmonicBasis, dolbeault: Option<&DolbeaultSpace>) -> Self {
        HarmonicDocument {
            engine_version: ENGINE_VERSION,
            manifold: manifold.to_string(),
            metric: metric.to_string(),
            p: h.bidegree.0,
            q: h.bidegree.1,
            dimension: h.dimension(),
            basis: h.forms.iter().map(InvariantForm::render).collect(),
            label: "invariant part",
            dolbeault_dimension: dolbeault.map(|d| d.dimension),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionDocument {
    pub engine_version: &'static str,
    pub manifold: String,
    pub solution_space_dimension: usize,
    pub solution_space: Vec<String>,
    pub certificate: Option<Vec<String>>,
    pub conclusion: &'static str,
}

impl ObstructionDocument {
    pub fn new(manifold: &str, ob: &ObstructionCertificate) -> Self {
        ObstructionDocument {
            engine_version: ENGINE_VERSION,
            manifold: manifold.to_string(),
            solution_space_dimension: ob.solution_space.len(),
            solution_space: ob.solution_space.iter().map(InvariantForm::render).collect(),
            certificate: ob.certificate.as_ref().map(|v| v.iter().map(|x| x.to_string()).collect()),
            conclusion: if ob.is_conclusive() {
                "no invariant compatible symplectic form: omega(v, Jv) = 0 for every closed compatible omega"
            } else {
                "inconclusive"
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchRow {
    pub index: usize,
    pub metric: String,
    pub flags: Flags,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct BatchSummary {
    pub samples: usize,
    pub gauduchon: usize,
    pub strongly_gauduchon: usize,
    pub integral_condition: usize,
    pub sg_without_ic: usize,
    pub ic_orthogonality_disagreements: usize,
    /// Evidence only: every sampled Gauduchon metric was strongly Gauduchon.
    pub all_sampled_gauduchon_are_sg: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchDocument {
    pub engine_version: &'static str,
    pub manifold: String,
    pub seed: u64,
    pub rows: Vec<BatchRow>,
    pub summary: BatchSummary,
}

impl BatchDocument {
    pub fn new(manifold: &str, seed: u64, rows: Vec<BatchRow>) -> Self {
        let mut s = BatchSummary { samples: rows.len(), ..Default::default() };
        let mut all = true;
        for r in &rows {
            let f = &r.flags;
            s.gauduchon += (f.gauduchon == Verdict::Holds) as usize;
            s.strongly_gauduchon += (f.strongly_gauduchon == Verdict::Holds) as usize;
            s.integral_condition += (f.integral_condition == Verdict::Holds) as usize;
            s.sg_without_ic += (f.strongly_gauduchon == Verdict::Holds && f.integral_condition == Verdict::Fails) as usize;
            let determined = f.integral_condition != Verdict::Undetermined && f.orthogonality != Verdict::Undetermined;
            s.ic_orthogonality_disagreements += (determined && f.integral_condition != f.orthogonality) as usize;
            if f.gauduchon == Verdict::Holds && f.strongly_gauduchon != Verdict::Holds {
                all = false;
            }
        }
        s.all_sampled_gauduchon_are_sg = all;
        BatchDocument { engine_version: ENGINE_VERSION, manifold: manifold.to_string(), seed, rows, summary: s }
    }
}
