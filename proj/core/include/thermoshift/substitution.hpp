#ifndef THERMOSHIFT_SUBSTITUTION_HPP
#define THERMOSHIFT_SUBSTITUTION_HPP

#include <vector>

#include "thermoshift/word.hpp"

namespace thermoshift {

// Symbol-to-word substitution inducing a sliding conjugacy h between two
// shifts: h(x) = tau(x_1) tau(x_2) ...   Built instances guarantee that
// admissible source transitions map to admissible target words and that the
// induced map separates distinct source words up to the verified depth (no
// image of one is a prefix of the image of the other).
class SubstitutionCode {
 public:
  // images[a-1] is tau(a).  verify_depth bounds the injectivity check; it is
  // clamped so the word table stays small.
  static SubstitutionCode build(MatrixPtr source, MatrixPtr target,
                                std::vector<Word> images, int verify_depth = 8);

  const MatrixPtr& source() const { return source_; }
  const MatrixPtr& target() const { return target_; }
  const Word& image(int symbol) const { return images_[symbol - 1]; }
  const std::vector<Word>& images() const { return images_; }
  int max_image_length() const;
  int verified_depth() const { return verified_depth_; }

  Word apply_code(const Word& w) const;

  // Splits v into the image of a maximal source prefix plus a remainder that
  // is a proper prefix of some continuing image (look-ahead), or is empty.
  struct Decoded {
    Word source_prefix;
    Word remainder;
  };
  Decoded decode(const Word& v) const;

 private:
  SubstitutionCode(MatrixPtr s, MatrixPtr t, std::vector<Word> images, int verified)
      : source_(std::move(s)),
        target_(std::move(t)),
        images_(std::move(images)),
        verified_depth_(verified) {}

  MatrixPtr source_;
  MatrixPtr target_;
  std::vector<Word> images_;
  int verified_depth_;
};

}  // namespace thermoshift

#endif
