//! Named modules shipped with the tool, with their known Betti tables.

use syzcalc::gradedmod::{GradedModule, ModuleDescription};
use syzcalc::Field;

pub struct Fixture {
    pub name: &'static str,
    pub source: &'static str,
    /// Nonzero `(p, q, β_{p,q})`.
    pub betti: &'static [(usize, i64, usize)],
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "s-mod-xy",
        source: include_str!("../fixtures/s-mod-xy.mod"),
        betti: &[(0, 0, 1), (1, 0, 2), (2, 0, 1)],
    },
    Fixture {
        name: "residue-field-xyz",
        source: include_str!("../fixtures/residue-field-xyz.mod"),
        betti: &[(0, 0, 1), (1, 0, 3), (2, 0, 3), (3, 0, 1)],
    },
    Fixture {
        name: "complete-intersection",
        source: include_str!("../fixtures/complete-intersection.mod"),
        betti: &[(0, 0, 1), (1, 1, 2), (2, 2, 1)],
    },
    Fixture {
        name: "twisted-cubic",
        source: include_str!("../fixtures/twisted-cubic.mod"),
        betti: &[(0, 0, 1), (1, 1, 3), (2, 1, 2)],
    },
    Fixture {
        name: "free-twisted",
        source: include_str!("../fixtures/free-twisted.mod"),
        betti: &[(0, 0, 1), (0, 1, 1)],
    },
    Fixture {
        name: "two-generators",
        source: include_str!("../fixtures/two-generators.mod"),
        betti: &[(0, 0, 2), (1, 0, 3), (2, 1, 1)],
    },
    Fixture {
        name: "cuspidal-cubic",
        source: include_str!("../fixtures/cuspidal-cubic.mod"),
        betti: &[(0, 0, 1), (1, 2, 1)],
    },
];

impl Fixture {
    pub fn module(&self, field: Field) -> syzcalc::Result<GradedModule> {
        ModuleDescription::parse_text(self.source)?.build(field)
    }
}

pub fn by_name(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use syzcalc::groebner::GbOptions;

    #[test]
    fn fixtures_have_their_tables() {
        for f in FIXTURES {
            let table = f.module(Field::Rationals).unwrap().betti_table(&GbOptions::default()).unwrap();
            let got: Vec<(usize, i64, usize)> = table.to_entries().iter().map(|e| (e.p, e.q, e.value)).filter(|e| e.2 > 0).collect();
            assert_eq!(got, f.betti, "{}", f.name);
        }
        assert!(by_name("twisted-cubic").is_some());
    }
}
