/// A theorem-backed statement that reports may cite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Citation {
    pub tag: &'static str,
    pub statement: &'static str,
}

/// Every tag a report may emit.
pub const REGISTRY: &[Citation] = &[
    Citation {
        tag: "gldim-upper-bound",
        statement: "complete local domain R of char p: gl.dim(R^perf) <= 2 dim R + 1",
    },
    Citation {
        tag: "gldim-coherent",
        statement: "complete local domain R, not a field, with coherent perfection: gl.dim(R^perf) = dim R + 1",
    },
    Citation {
        tag: "wdim-coherent",
        statement: "complete local domain R with coherent perfection: w.dim(R^perf) = dim R",
    },
    Citation {
        tag: "curve-valuation-ring",
        statement: "dim R = 1: R^perf stably coherent <=> gl.dim 2 <=> w.dim 1 <=> R^perf a valuation ring",
    },
    Citation {
        tag: "curve-noncoherent-gldim",
        statement: "dim R = 1 and R^perf not coherent: gl.dim(R^perf) = 3",
    },
    Citation {
        tag: "curve-noncoherent-wdim",
        statement: "dim R = 1 and gl.dim(R^perf) = 3: w.dim(R^perf) = 2",
    },
    Citation {
        tag: "curve-coherence-criterion",
        statement: "reduced 1-dimensional R: R^perf coherent <=> normalization / R purely inseparable",
    },
    Citation {
        tag: "zero-dim-coherent",
        statement: "local zero-dimensional R is F-coherent; R^perf is a field",
    },
    Citation {
        tag: "node-invariants",
        statement: "R = F_p[X,Y]/(XY) localized at (x,y): gl.dim(R^perf) = 3, w.dim(R^perf) = 2, dim 1",
    },
    Citation {
        tag: "node-tor2",
        statement: "over the perfection of F_p[X,Y]/(XY): Tor_2(R/(x), R/(y)) is nonzero",
    },
    Citation {
        tag: "hk-rational",
        statement: "F-finite F-coherent R: the Hilbert-Kunz multiplicity is rational",
    },
    Citation {
        tag: "seibert-form",
        statement: "p.dim M finite: sum_i (-1)^i l(Tor_i(F^n M, N)) = sum_i b_i p^{in} with b_i rational",
    },
    Citation {
        tag: "perfect-tor-vanishing",
        statement: "perfect rings A -> B, A -> C: Tor_i^A(B, C) = 0 for i >= 1",
    },
    Citation {
        tag: "perfect-radical-product",
        statement: "radical ideals in a perfect algebra: I J = I cap J",
    },
    Citation {
        tag: "perfect-pdim-bound",
        statement: "perfectly finitely presented R -> S by m relations: p.dim_R S <= 2m",
    },
    Citation {
        tag: "witt-mod-p",
        statement: "perfect R: W(R)/pW(R) is isomorphic to R",
    },
    Citation {
        tag: "tilt-fp",
        statement: "the tilt of Z/p^L is F_p",
    },
    Citation {
        tag: "tilt-perfect",
        statement: "perfect reduced A of char p: the tilt is A via coordinate 0",
    },
];

pub fn lookup(tag: &str) -> Option<&'static Citation> {
    REGISTRY.iter().find(|c| c.tag == tag)
}
