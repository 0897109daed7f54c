#include "thermoshift/substitution.hpp"

#include <algorithm>

namespace thermoshift {

namespace {

bool is_prefix(const Word& p, const Word& w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

}  // namespace

SubstitutionCode SubstitutionCode::build(MatrixPtr source, MatrixPtr target,
                                         std::vector<Word> images, int verify_depth) {
  if (!source || !target) throw Error(ErrorCode::BadInput, "null matrix");
  if (static_cast<int>(images.size()) != source->size())
    throw Error(ErrorCode::BadInput, "need one image word per source symbol");
  for (const Word& img : images) {
    if (img.empty()) throw Error(ErrorCode::BadInput, "empty image word");
    if (!is_admissible(*target, img))
      throw Error(ErrorCode::NotAdmissible, "image word is not admissible in the target");
  }
  // Every admissible source step must produce an admissible junction.
  for (int a = 1; a <= source->size(); ++a)
    for (int b = 1; b <= source->size(); ++b) {
      if (!source->entry(a, b)) continue;
      if (!target->entry(images[a - 1].back(), images[b - 1].front()))
        throw Error(ErrorCode::NotAdmissible,
                    "images of an admissible transition do not concatenate");
    }

  SubstitutionCode code(std::move(source), std::move(target), std::move(images), 0);

  // Separation check: distinct source words of the tested depth must have
  // images that differ within their common length.  The depth is clamped so
  // the pairwise comparison stays cheap.
  int depth = std::max(1, verify_depth);
  while (depth > 1 && count_admissible_words(*code.source_, depth) > 4096) --depth;
  std::vector<Word> originals = admissible_words(*code.source_, depth);
  std::vector<Word> imgs(originals.size());
  for (std::size_t i = 0; i < originals.size(); ++i) imgs[i] = code.apply_code(originals[i]);
  for (std::size_t i = 0; i < imgs.size(); ++i)
    for (std::size_t j = i + 1; j < imgs.size(); ++j)
      if (is_prefix(imgs[i], imgs[j]) || is_prefix(imgs[j], imgs[i]))
        throw Error(ErrorCode::BadInput,
                    "code does not separate source words " +
                        format_word(originals[i], code.source_->size()) + " and " +
                        format_word(originals[j], code.source_->size()) + " at depth " +
                        std::to_string(depth));
  code.verified_depth_ = depth;
  return code;
}

int SubstitutionCode::max_image_length() const {
  std::size_t m = 0;
  for (const Word& img : images_) m = std::max(m, img.size());
  return static_cast<int>(m);
}

Word SubstitutionCode::apply_code(const Word& w) const {
  if (!is_admissible(*source_, w))
    throw Error(ErrorCode::NotAdmissible, "source word is not admissible");
  Word out;
  for (int a : w) {
    const Word& img = images_[a - 1];
    out.insert(out.end(), img.begin(), img.end());
  }
  return out;
}

SubstitutionCode::Decoded SubstitutionCode::decode(const Word& v) const {
  if (!is_admissible(*target_, v))
    throw Error(ErrorCode::NotAdmissible, "target word is not admissible");
  Decoded out;
  std::size_t pos = 0;
  while (pos < v.size()) {
    int matched = 0;
    int symbol = 0;
    bool lookahead = false;
    for (int a = 1; a <= source_->size(); ++a) {
      if (!out.source_prefix.empty() && !source_->entry(out.source_prefix.back(), a))
        continue;
      const Word& img = images_[a - 1];
      if (pos + img.size() <= v.size() &&
          std::equal(img.begin(), img.end(), v.begin() + pos)) {
        ++matched;
        symbol = a;
      } else if (pos + img.size() > v.size() &&
                 std::equal(v.begin() + pos, v.end(), img.begin())) {
        lookahead = true;
      }
    }
    if (matched > 1)
      throw Error(ErrorCode::NotDecodable, "ambiguous decomposition at position " +
                                               std::to_string(pos));
    if (matched == 1) {
      out.source_prefix.push_back(symbol);
      pos += images_[symbol - 1].size();
      continue;
    }
    if (lookahead) break;  // the tail is an unfinished image
    throw Error(ErrorCode::NotDecodable,
                "no image matches at position " + std::to_string(pos));
  }
  out.remainder.assign(v.begin() + pos, v.end());
  return out;
}

}  // namespace thermoshift
