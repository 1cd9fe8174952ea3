#include "carleson/spectrum_io.hpp"

#include "carleson/errors.hpp"

namespace carleson {

nlohmann::json spectrum_to_json(const VectorSpectrum& spectrum) {
  nlohmann::json entries = nlohmann::json::array();
  const auto all = spectrum.entries();
  for (std::size_t i = 0; i < all.size();) {
    std::size_t end = i;
    while (end < all.size() && all[end].n == all[i].n) ++end;
    nlohmann::json vec = nlohmann::json::array();
    const Eigen::VectorXcd dense = spectrum.at(all[i].n);
    for (Eigen::Index p = 0; p < dense.size(); ++p) {
      vec.push_back({dense[p].real(), dense[p].imag()});
    }
    entries.push_back({{"n", all[i].n.to_string()},
                       {"j", all[i].generation},
                       {"l", all[i].offset},
                       {"vector", std::move(vec)}});
    i = end;
  }
  return {{"dim", spectrum.dim()}, {"entries", std::move(entries)}};
}

VectorSpectrum spectrum_from_json(const nlohmann::json& doc) {
  const int dim = doc.at("dim").get<int>();
  std::vector<SpectrumEntry> entries;
  for (const auto& item : doc.at("entries")) {
    const auto n = TaylorIndex::parse(item.at("n").get<std::string>());
    const int j = item.at("j").get<int>();
    const int l = item.at("l").get<int>();
    const auto& vec = item.at("vector");
    if (static_cast<int>(vec.size()) != dim) throw DomainError("spectrum vector length != dim");
    for (int p = 0; p < dim; ++p) {
      const std::complex<double> v(vec[p][0].get<double>(), vec[p][1].get<double>());
      if (v != 0.0) entries.push_back({n, j, l, p, v});
    }
  }
  return VectorSpectrum(dim, std::move(entries));
}

}  // namespace carleson
