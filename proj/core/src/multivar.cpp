namespace algser {
}
