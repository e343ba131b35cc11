use std::process::exit;

fn main() {
    exit(monoclique::cli::run());
}
