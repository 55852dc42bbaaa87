use nalgebra::DVector;
use orbispec::casimir::{
    bracket_identity_defect, cartan_split, casimir_split, commutator_defect, isotropy_potential,
    potential_via_curvature, IsotropyKind, LieAlgebra, Representation,
};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Ctx, ExperimentError};
use crate::registry::Experiment;
use crate::report::{Check, Outcome};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CasimirParams {
    pub form_degrees: Vec<usize>,
    pub pairs: usize,
    pub potential_tol: f64,
    pub bracket_tol: f64,
}

impl Default for CasimirParams {
    fn default() -> Self {
        CasimirParams {
            form_degrees: vec![0, 1, 2],
            pairs: 100,
            potential_tol: 1e-10,
            bracket_tol: 1e-12,
        }
    }
}

/// Casimir potentials of form bundles over the hyperbolic plane.
pub struct CasimirAlpha;

impl Experiment for CasimirAlpha {
    const NAME: &'static str = "casimir-alpha";
    const SUMMARY: &'static str =
        "isotropy Casimir potential of k-form bundles of sl(2,R) against the curvature term";
    const VERIFIES: &'static str =
        "the Casimir potential equals the curvature endomorphism built from R(X,Y) = −ad[X,Y]; the Casimir is equivariant; [[Y,X],Z] bracket identity";
    type Params = CasimirParams;

    fn run(p: &CasimirParams, ctx: &mut Ctx) -> Result<Outcome, ExperimentError> {
        let alg = LieAlgebra::sl2();
        let split = cartan_split(&alg)?;
        let mut checks = Vec::new();
        let mut potentials = Vec::new();
        for &k in &p.form_degrees {
            let rep = Representation::isotropy(&alg, &split, IsotropyKind::Forms(k))?;
            let cmp = potential_via_curvature(&alg, &split, &rep)?;
            checks.push(Check::le(
                format!("potential_defect_k{k}"),
                cmp.defect,
                p.potential_tol,
            ));
            let v = isotropy_potential(&split, &rep)?;
            checks.push(Check::le(
                format!("potential_commutator_k{k}"),
                commutator_defect(&v, &rep),
                p.potential_tol,
            ));
            potentials.push(serde_json::json!({ "k": k, "trace": v.trace(), "dim": rep.dim() }));
        }
        let adj = Representation::adjoint(&alg)?;
        let cs = casimir_split(&alg, &split, &adj)?;
        checks.push(Check::le(
            "adjoint_casimir_commutator",
            commutator_defect(&cs.casimir, &adj),
            p.potential_tol,
        ));
        checks.push(Check::le(
            "adjoint_split_defect",
            cs.split_defect,
            p.potential_tol,
        ));
        let mut worst: f64 = 0.0;
        for _ in 0..p.pairs {
            let y = &split.k()[0] * ctx.rng.random_range(-1.0..1.0);
            let c: Vec<f64> = (0..split.dim_p())
                .map(|_| ctx.rng.random_range(-1.0..1.0))
                .collect();
            let x = split.from_p_coords(&DVector::from_vec(c));
            worst = worst.max(bracket_identity_defect(&alg, &split, &y, &x)?);
        }
        checks.push(Check::le("bracket_identity_defect", worst, p.bracket_tol));
        Ok(Outcome::new(
            checks,
            serde_json::json!({ "potentials": potentials, "bracket_defect": worst }),
        ))
    }
}
