fn main() { std::process::exit(wngf_cli::run(&std::env::args().skip(1).collect::<Vec<_>>())); }
