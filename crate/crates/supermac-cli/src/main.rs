fn main() {
    println!("supermac");
}
