#include "fracgreen/report.hpp"

#include <cstdio>
#include <string>

namespace fracgreen {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv_header(std::ostream& os) {
  os << "identity_id,preset,a,delta,mu,N,box,lhs_re,lhs_im,rhs_re,rhs_im,"
        "abs_residual,rel_residual\n";
}

void write_csv_row(std::ostream& os, const IdentityReport& r) {
  os << identity_name(r.identity_id) << ',' << preset_name(r.preset) << ','
     << num(r.a) << ',' << num(r.delta) << ',' << num(r.mu) << ',' << r.n << ','
     << num(r.box) << ',' << num(r.lhs.real()) << ',' << num(r.lhs.imag()) << ','
     << num(r.rhs.real()) << ',' << num(r.rhs.imag()) << ','
     << num(r.abs_residual) << ',' << num(r.rel_residual) << '\n';
}

void write_jsonl_row(std::ostream& os, const IdentityReport& r) {
  os << "{\"identity_id\":\"" << identity_name(r.identity_id)
     << "\",\"preset\":\"" << preset_name(r.preset) << "\",\"a\":" << num(r.a)
     << ",\"delta\":" << num(r.delta) << ",\"mu\":" << num(r.mu)
     << ",\"dim\":" << r.dim << ",\"N\":" << r.n << ",\"box\":" << num(r.box)
     << ",\"lhs_re\":" << num(r.lhs.real()) << ",\"lhs_im\":" << num(r.lhs.imag())
     << ",\"rhs_re\":" << num(r.rhs.real()) << ",\"rhs_im\":" << num(r.rhs.imag())
     << ",\"abs_residual\":" << num(r.abs_residual)
     << ",\"rel_residual\":" << num(r.rel_residual);
  if (r.convergence_order)
    os << ",\"convergence_order\":" << num(*r.convergence_order);
  os << "}\n";
}

}  // namespace fracgreen
