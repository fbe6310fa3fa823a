fn main() {
    eprintln!("ising2mm: command-line interface not wired up yet");
    std::process::exit(2);
}
