fn main() {
    // Placeholder until the command dispatcher lands.
    eprintln!("tropkit CLI under construction");
    std::process::exit(2);
}
