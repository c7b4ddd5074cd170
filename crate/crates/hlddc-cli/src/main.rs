fn main() {
    eprintln!("hlddc: not yet wired up");
    std::process::exit(1);
}
