use crate::error::{Error, Result};
use crate::numkit::CMatrix;
use crate::sysmodel::StateSpace;
use serde::Serialize;

/// Element values of the RLC ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderParams {
    /// Load resistor across the last capacitor.
    pub r: f64,
    /// Series resistance of every inductor.
    pub rbar: f64,
    pub c: f64,
    pub l: f64,
}

impl Default for LadderParams {
    fn default() -> Self {
        LadderParams {
            r: 1.0,
            rbar: 1e-3,
            c: 1.0,
            l: 1.0,
        }
    }
}

/// RLC ladder of odd order 2k−1 driven by a current source into node 1,
/// measuring the voltage at node 1.
///
/// States are [v1, i1, v2, i2, ..., vk]: node voltages across shunt
/// capacitors and currents through the series R̄–L branches between them.
///   C v_j' = i_{j−1} − i_j        (− v_k / R at the last node)
///   L i_j' = v_j − v_{j+1} − R̄ i_j
/// Order 1 is a single RC section with pole −1/(RC).
pub fn generate_ladder(order: usize, p: LadderParams) -> Result<StateSpace> {
    if order == 0 || order.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!(
            "ladder order must be odd and positive, got {order}"
        )));
    }
    for (v, name) in [(p.r, "R"), (p.c, "C"), (p.l, "L")] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameters(format!("{name} must be positive")));
        }
    }
    if !(p.rbar.is_finite() && p.rbar >= 0.0) {
        return Err(Error::InvalidParameters("Rbar must be non-negative".into()));
    }
    let n = order;
    let k = n.div_ceil(2);
    let mut a = vec![0.0; n * n];
    let mut set = |i: usize, j: usize, v: f64| a[i * n + j] = v;
    for j in 0..k {
        let v = 2 * j;
        if j > 0 {
            set(v, v - 1, 1.0 / p.c);
        }
        if j + 1 < k {
            set(v, v + 1, -1.0 / p.c);
        } else {
            set(v, v, -1.0 / (p.r * p.c));
        }
    }
    for j in 0..k - 1 {
        let i = 2 * j + 1;
        set(i, i - 1, 1.0 / p.l);
        set(i, i + 1, -1.0 / p.l);
        set(i, i, -p.rbar / p.l);
    }
    let mut b = vec![0.0; n];
    b[0] = 1.0 / p.c;
    let mut c = vec![0.0; n];
    c[0] = 1.0;
    StateSpace::new(
        crate::numkit::rmat(n, n, &a),
        crate::numkit::rmat(n, 1, &b),
        crate::numkit::rmat(1, n, &c),
        CMatrix::zeros(1, 1),
    )
}
