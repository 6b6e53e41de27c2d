#pragma once

#include <string>
#include <string_view>

#include "formpin/image.hpp"

namespace formpin {

/// Which extremity of a character a keypoint sits on.
enum class TipClass { Left, Right, Top, Bottom };

inline constexpr TipClass kAllTips[] = {TipClass::Left, TipClass::Right,
                                        TipClass::Top, TipClass::Bottom};

std::string_view to_string(TipClass tip);

/// Which end of the word a keypoint was taken from.
enum class WordEnd { First, Last };

/// A matched point pair. The estimator recovers H with template ~ H * test.
struct Correspondence {
  Point template_pt;
  Point test_pt;
  TipClass tip = TipClass::Left;
  std::string word_text;
};

}  // namespace formpin
