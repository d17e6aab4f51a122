//! Named example maps used by the tests, the command line and the browser demo.

/// `(name, "f1, f2")`.
pub const MAPS: &[(&str, &str)] = &[
    ("monomial-square-twist", "x^2, x*y^2"),
    ("small-topological-degree", "y^2*(x*y+1), x*(x*y^3+1)"),
    ("henon", "y, y^2 - x"),
    ("henon-shifted", "y, y^2 + 3 - 2*x"),
    ("square", "x^2, y^2"),
    ("square-cube", "x^2, y^3"),
    ("fibonacci-monomial", "y, x*y"),
    ("monomial-cat", "x*y, x*y^2"),
    ("cubic-henon", "x^3 + y, x"),
    ("triangular", "x^2 + y, y^2"),
    ("complex-square", "x^2 - y^2, 2*x*y"),
    ("identity", "x, y"),
];

/// The expression registered under `name`.
pub fn lookup(name: &str) -> Option<&'static str> {
    MAPS.iter().find(|(n, _)| *n == name).map(|(_, e)| *e)
}
