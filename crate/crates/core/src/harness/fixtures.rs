use crate::numkit::rmat;
use crate::reduction::Method;
use crate::sysmodel::StateSpace;
use serde::Serialize;

/// A (method, order) pair to run on a fixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    pub method: Method,
    pub order: usize,
}

#[derive(Debug, Clone)]
pub struct ExampleFixture {
    pub name: &'static str,
    pub system: StateSpace,
    pub scenarios: Vec<Scenario>,
}

/// Sixth-order SISO plant of the single-frequency example.
pub fn example1_system() -> StateSpace {
    #[rustfmt::skip]
    let a = [
         0.2128,  0.7749,  0.1945, -0.2864,  0.0501, -0.0464,
        -0.6613, -2.6801, -0.8468, -0.5733, -0.7945,  0.9653,
         0.2423, -0.8043, -0.7669, -0.5423, -0.9032,  0.1441,
        -0.1508,  0.5229,  0.6927, -0.0704,  0.8778, -0.5350,
         0.3542,  0.7882,  0.3681, -0.2077, -0.1705, -0.7660,
        -0.6424, -0.5045, -0.0252,  0.6453,  0.9838, -0.9392,
    ];
    let b = [0.9673, -1.4467, -1.2514, -0.4141, -0.6560, -0.1651];
    let c = [-1.5883, -1.3181, 0.5656, 1.1507, -0.5106, -0.7736];
    StateSpace::new(rmat(6, 6, &a), rmat(6, 1, &b), rmat(1, 6, &c), rmat(1, 1, &[3.9764]))
        .expect("fixture is consistent")
}

/// Fourth-order SISO plant of the interval example.
pub fn example2_system() -> StateSpace {
    #[rustfmt::skip]
    let a = [
        -0.62,  0.44, -0.03, -0.00,
         0.44, -3.64,  0.59,  0.02,
         0.03, -0.59, -6.80, -0.46,
        -0.00,  0.02,  0.46, -5.64,
    ];
    let b = [-0.31, 0.47, 0.12, -0.00];
    let c = [-0.31, 0.47, -0.12, -0.00];
    StateSpace::new(rmat(4, 4, &a), rmat(4, 1, &b), rmat(1, 4, &c), rmat(1, 1, &[0.0]))
        .expect("fixture is consistent")
}

pub fn example1() -> ExampleFixture {
    let mut scenarios = vec![
        Scenario { method: Method::Fibt, order: 3 },
        Scenario { method: Method::Gspa { rho: 0.0 }, order: 3 },
        Scenario { method: Method::Gspa { rho: 0.5 }, order: 3 },
        Scenario { method: Method::Gspa { rho: 5.0 }, order: 3 },
    ];
    for eps in [3.0, 4.0, 5.0] {
        scenarios.push(Scenario {
            method: Method::SfFdbt { varpi: 0.0, epsilon: eps },
            order: 3,
        });
    }
    ExampleFixture {
        name: "ex1",
        system: example1_system(),
        scenarios,
    }
}

/// Example 2 with band [−wl, wl]; Case 1 is wl = 0.4, Case 2 is wl = 0.8.
pub fn example2(wl: f64) -> ExampleFixture {
    let mut scenarios = Vec::new();
    for r in [1, 2] {
        scenarios.push(Scenario { method: Method::Fibt, order: r });
        scenarios.push(Scenario { method: Method::Fgbt { w1: -wl, w2: wl }, order: r });
        scenarios.push(Scenario { method: Method::IntervalFdbt { w1: -wl, w2: wl }, order: r });
    }
    ExampleFixture {
        name: if wl == 0.4 { "ex2_case1" } else { "ex2_case2" },
        system: example2_system(),
        scenarios,
    }
}
