// CSV serialization with shortest round-trip float formatting, so identical
// inputs produce byte-identical files.
#pragma once

#include <string>
#include <vector>

#include "khess/bifurcation.hpp"
#include "khess/transform.hpp"

namespace khess::csv {

// shortest decimal that round-trips to the same double
std::string format_double(double v);

void write_profile(const std::string& path, const RadialSolution& sol);   // r,w,wprime
void write_orbit(const std::string& path, const Orbit& orb);              // t,x,y
void write_sweep(const std::string& path, const BifurcationCurve& curve); // a,lambda

RadialSolution read_profile(const std::string& path);
std::vector<std::pair<double, double>> read_weight_table(const std::string& path);  // r,rho

}  // namespace khess::csv
