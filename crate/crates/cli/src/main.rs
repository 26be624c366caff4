fn main() { println!("cqm"); }
