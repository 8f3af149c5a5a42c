#include <iostream>

int main() {
    std::cout << "cyclic-forge: under construction\n";
    return 0;
}
