#include "profiler/synthetic.hpp"

#include <array>
#include <cmath>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "profiler/random.hpp"

namespace profiler::synthetic {

namespace {

constexpr std::array<std::string_view, 56> kFiller = {
    "el",      "la",      "de",     "que",     "y",       "en",      "un",     "una",
    "es",      "por",     "con",    "para",    "muy",     "pero",    "más",    "ya",
    "también", "hoy",     "casa",   "trabajo", "tarde",   "noche",   "amigos", "comida",
    "ciudad",  "semana",  "partido", "película", "música", "libro",  "calle",  "lluvia",
    "sol",     "café",    "viaje",  "escuela", "familia", "mañana",  "juego",  "equipo",
    "tiempo",  "noticia", "mundo",  "gente",   "vida",    "cosa",    "día",    "año",
    "momento", "lugar",   "camino", "playa",   "perro",   "gato",    "coche",  "tren"};

constexpr std::array<std::string_view, 4> kFloods = {"noooo!!!!", "siiii!!!", "vamoooos!!!!",
                                                      "queee!!!"};
constexpr std::array<std::string_view, 4> kAgeCues = {"jajaja", "chido", "ojalá",
                                                       "atentamente"};
constexpr std::array<std::string_view, kNumTraits> kTraitCues = {"fiestero", "nervios",
                                                                 "gracias", "agenda", "poesía"};
constexpr std::array<std::string_view, 3> kHandles = {"@pepe_22", "@MariaLópez", "@club"};
constexpr std::array<std::string_view, 3> kLinks = {"https://t.co/xYz12", "http://ejemplo.mx/a?b=1",
                                                     "https://noticias.es/2016/05/nota"};

std::string_view pick(std::mt19937_64& rng, std::span<const std::string_view> pool) {
  return pool[uniform_below(rng, pool.size())];
}

void append_word(std::string& doc, std::string_view w) {
  if (!doc.empty()) doc += ' ';
  doc += w;
}

std::string filler_document(std::mt19937_64& rng) {
  std::string doc;
  const size_t words = 5 + uniform_below(rng, 8);
  for (size_t i = 0; i < words; ++i) append_word(doc, pick(rng, kFiller));
  if (uniform_unit(rng) < 0.2) doc = std::string(pick(rng, kHandles)) + " " + doc;
  if (uniform_unit(rng) < 0.15) append_word(doc, pick(rng, kLinks));
  if (uniform_unit(rng) < 0.1) append_word(doc, "#" + std::string(pick(rng, kFiller)));
  return doc;
}

void plant_gender(std::string& doc, Gender g, std::mt19937_64& rng) {
  if (g == Gender::kFemale) append_word(doc, "^_^");
  else append_word(doc, pick(rng, kFloods));
}

}  // namespace

std::vector<Sample> pan_samples(const PanOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::vector<Sample> out;
  out.reserve(opts.samples);
  for (size_t i = 0; i < opts.samples; ++i) {
    Sample s;
    s.id = "synth" + std::to_string(i + 1);
    const Gender g = i % 2 == 0 ? Gender::kFemale : Gender::kMale;
    const size_t band = uniform_below(rng, kAgeBands.size());
    TraitVector traits{};
    for (auto& t : traits) t = static_cast<double>(uniform_below(rng, 19)) * 0.05 - 0.45;
    for (auto& t : traits) t = std::round(t * 100.0) / 100.0;
    s.labels = {g, kAgeBands[band], traits};

    std::vector<std::string> docs;
    for (size_t d = 0; d < opts.documents_per_sample; ++d) {
      std::string doc = filler_document(rng);
      if (uniform_unit(rng) < opts.marker_rate) plant_gender(doc, g, rng);
      if (uniform_unit(rng) < 0.5) append_word(doc, kAgeCues[band]);
      docs.push_back(std::move(doc));
    }
    // Every sample carries at least one gender marker.
    plant_gender(docs[uniform_below(rng, docs.size())], g, rng);
    for (size_t k = 0; k < kNumTraits; ++k) {
      const auto cues = static_cast<size_t>(std::lround((traits[k] + 0.5) * 6.0));
      for (size_t c = 0; c < cues; ++c)
        append_word(docs[uniform_below(rng, docs.size())], kTraitCues[k]);
    }
    for (size_t d = 0; d < docs.size(); ++d)
      s.documents.push_back({s.id + "#" + std::to_string(d + 1), std::move(docs[d]), {}});
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<LabeledDocument> flat_documents(const FlatOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::vector<LabeledDocument> out;
  out.reserve(2 * opts.documents_per_class);
  for (size_t i = 0; i < 2 * opts.documents_per_class; ++i) {
    const Gender g = i % 2 == 0 ? Gender::kFemale : Gender::kMale;
    std::string doc = filler_document(rng);
    if (uniform_unit(rng) < opts.marker_rate) plant_gender(doc, g, rng);
    LabeledDocument ld;
    ld.document = {"c" + std::to_string(i + 1), std::move(doc), {}};
    ld.labels.gender = g;
    out.push_back(std::move(ld));
  }
  return out;
}

}  // namespace profiler::synthetic
