#include "kbc/checkpoint.hpp"

#include <array>
#include <fstream>
#include <string>

#include "binary_io.hpp"

namespace kbc {

namespace {
constexpr std::uint32_t kVersion = 1;
}

void save_checkpoint(const ModelParams& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint '" + path.string() + "'");
  out.write("KBCK", 4);
  detail::write_le(out, kVersion);
  detail::write_le(out, static_cast<std::uint8_t>(model.variant()));
  detail::write_le(out, static_cast<std::uint8_t>(sizeof(Real)));
  detail::write_le(out, std::uint16_t{0});
  detail::write_le(out, static_cast<std::uint32_t>(model.num_entities()));
  detail::write_le(out, static_cast<std::uint32_t>(model.num_predicates()));
  detail::write_le(out, static_cast<std::uint32_t>(model.rank()));
  detail::write_le(out, static_cast<std::uint32_t>(model.factors().size()));
  for (const auto& f : model.factors()) {
    for (Real v : f.values()) detail::write_le(out, v);
  }
  if (!out) throw Error("failed writing checkpoint '" + path.string() + "'");
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open checkpoint '" + path.string() + "'");
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || std::string_view(magic.data(), 4) != "KBCK") {
    throw ParseError("'" + path.string() + "' is not a checkpoint");
  }
  const auto version = detail::read_le<std::uint32_t>(in);
  if (version != kVersion) throw ParseError("unsupported checkpoint version " + std::to_string(version));
  const auto tag = detail::read_le<std::uint8_t>(in);
  const auto width = detail::read_le<std::uint8_t>(in);
  detail::read_le<std::uint16_t>(in);
  if (tag > static_cast<std::uint8_t>(ModelVariant::distmult)) throw ParseError("unknown model variant tag");
  if (width != 4 && width != 8) throw ParseError("unsupported checkpoint precision");
  const auto n = detail::read_le<std::uint32_t>(in);
  const auto p = detail::read_le<std::uint32_t>(in);
  const auto r = detail::read_le<std::uint32_t>(in);
  const auto count = detail::read_le<std::uint32_t>(in);
  if (r == 0) throw ParseError("checkpoint has rank 0");

  const auto variant = static_cast<ModelVariant>(tag);
  std::uintmax_t rows = 0;
  for (std::size_t f = 0; f < factor_names(variant).size(); ++f) rows += is_entity_factor(variant, f) ? n : p;
  if (count != factor_names(variant).size()) throw ParseError("factor count does not match the model variant");
  if (std::filesystem::file_size(path) != 28 + rows * r * width) {
    throw ParseError("checkpoint size does not match its header");
  }

  ModelParams model(variant, n, p, r);
  for (auto& f : model.factors()) {
    for (auto& v : f.values()) {
      v = width == 8 ? static_cast<Real>(detail::read_float_le<double>(in))
                     : static_cast<Real>(detail::read_float_le<float>(in));
    }
  }
  return model;
}

}  // namespace kbc
