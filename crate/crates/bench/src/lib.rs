//! Fixtures shared by the benchmarks.

use conic_nets::classify::PlaneOrbit;
use conic_nets::gf::Field;
use conic_nets::reps::{self, RepParams};
use conic_nets::Subspace;

/// Field and every valid plane representative for `q`.
pub fn plane_fixture(q: u64) -> (Field, Vec<(PlaneOrbit, Subspace)>) {
    let f = Field::new(q).expect("odd prime power");
    let p = RepParams::new(&f).expect("parameters exist for q >= 3");
    let planes =
        PlaneOrbit::all_for(q).into_iter().map(|o| (o, reps::plane_rep(&f, &p, o).expect("valid orbit"))).collect();
    (f, planes)
}
