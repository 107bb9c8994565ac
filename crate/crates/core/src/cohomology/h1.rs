use serde::Serialize;
use serde_json::{json, Value};

use super::{CohomologyError, DerivationMap, GradedSystem, zero_weight_inner_space};
use crate::algebra::Parity;
use crate::enveloping::VermaModule;
use crate::linalg::quotient_dim;

/// Dimensions behind one parity of `H¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParityDims {
    /// `dim Der_{(0)}`
    pub der0: usize,
    /// `dim Ider_{(0)}`
    pub ider0: usize,
}

impl ParityDims {
    pub fn h1(&self) -> usize {
        self.der0 - self.ider0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Result {
    pub p: u32,
    pub alpha: u32,
    pub lambda: [u32; 3],
    pub chi_f: [u32; 3],
    pub even: ParityDims,
    pub odd: ParityDims,
    /// Outer-class representatives, even ones first; within a parity, the
    /// canonical echelon basis of kernel residues modulo inner derivations.
    pub representatives: Vec<DerivationMap>,
}

impl H1Result {
    pub fn sdim(&self) -> (usize, usize) {
        (self.even.h1(), self.odd.h1())
    }

    pub fn dims(&self, parity: Parity) -> ParityDims {
        match parity {
            Parity::Even => self.even,
            Parity::Odd => self.odd,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "alpha": self.alpha,
            "lambda": self.lambda,
            "chi_f": self.chi_f,
            "h1": {"even": self.even.h1(), "odd": self.odd.h1()},
            "dims": {"even": self.even, "odd": self.odd},
            "representatives": self.representatives.iter().map(DerivationMap::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `H¹(g, Z_χ(λ))` per parity, with verified representatives.
pub fn h1(module: &VermaModule) -> Result<H1Result, CohomologyError> {
    let mut dims = [ParityDims { der0: 0, ider0: 0 }; 2];
    let mut representatives = Vec::new();
    for parity in Parity::BOTH {
        let sys = GradedSystem::new(module, parity);
        let der = sys.kernel();
        let inner = zero_weight_inner_space(module, parity);
        quotient_dim(&der, &inner).map_err(|_| CohomologyError::InnerNotInKernel(parity))?;
        for v in der.complement_of(&inner)? {
            let phi = sys.layout().decode(&v);
            phi.verify(module)?;
            representatives.push(phi);
        }
        dims[parity.bit() as usize] = ParityDims { der0: der.dim(), ider0: inner.dim() };
    }
    Ok(H1Result {
        p: module.p(),
        alpha: module.algebra().alpha(),
        lambda: module.lambda().0,
        chi_f: module.chi().chi_f,
        even: dims[0],
        odd: dims[1],
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SuperAlgebra;
    use crate::cohomology::is_outer;

    fn run(lambda: [i64; 3], chi: [i64; 3]) -> H1Result {
        let m = VermaModule::from_params(&SuperAlgebra::new(5, 2).unwrap(), lambda, chi);
        h1(&m).unwrap()
    }

    #[test]
    fn exceptional_weights_at_p5() {
        assert_eq!(run([2, 3, 3], [0, 0, 0]).sdim(), (6, 0));
        assert_eq!(run([2, 3, 0], [0, 0, 0]).sdim(), (1, 0));
        assert_eq!(run([2, 0, 3], [0, 0, 0]).sdim(), (1, 0));
        assert_eq!(run([3, 2, 2], [0, 0, 0]).sdim(), (0, 1));
        assert_eq!(run([0, 0, 0], [0, 0, 0]).sdim(), (0, 0));
        assert_eq!(run([2, 3, 3], [1, 0, 0]).sdim(), (0, 0));
    }

    #[test]
    fn representatives_are_outer() {
        let alg = SuperAlgebra::new(5, 2).unwrap();
        let m = VermaModule::from_params(&alg, [2, 3, 3], [0, 0, 0]);
        let r = h1(&m).unwrap();
        assert_eq!(r.representatives.len(), 6);
        assert_eq!(r.even, ParityDims { der0: 13, ider0: 7 });
        for phi in &r.representatives {
            assert!(is_outer(phi, &m).unwrap());
        }
    }

    #[test]
    fn json_shape() {
        let r = run([3, 2, 2], [0, 0, 0]);
        let j = r.to_json();
        assert_eq!(j["h1"]["even"], 0);
        assert_eq!(j["h1"]["odd"], 1);
        assert_eq!(j["lambda"], json!([3, 2, 2]));
        assert_eq!(j["representatives"][0]["parity"], "odd");
        assert!(j["representatives"][0]["images"]["x1"].is_array());
    }
}
