#include <iostream>

#include "tmscat/selftest.hpp"

int main() { return tmscat::run_selftest(std::cout); }
