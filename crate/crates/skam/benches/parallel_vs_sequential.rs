// Placeholder; fleshed out once the Monte Carlo and oracle modules land.
fn main() {}
