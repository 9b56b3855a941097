fn main() {
    if let Err(e) = arck_cli::run(arck_cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
