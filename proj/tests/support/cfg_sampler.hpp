#pragma once

// Random wordform generator that follows the transcription grammar rule by
// rule, so every sampled string is in the language by construction. Canonical
// mode restricts generation to an unambiguous subset (alphabetic codes, plain
// delimiters) and tracks the flattened sign/classifier ground truth alongside
// the text; full mode exercises every production, including the ones whose
// surface text is ambiguous, and tracks nothing.

#include <string>
#include <vector>

#include "hieroclf/mdc.hpp"
#include "hieroclf/rng.hpp"

namespace testsupport {

struct SampleOptions {
  bool canonical = false;
  int max_depth = 3;
  double ws_probability = 0.0;  // canonical mode: chance of a bare-space separator
};

struct Sampled {
  std::string text;
  std::vector<hieroclf::mdc::FlatSign> truth;  // canonical mode only
};

class CfgSampler {
 public:
  CfgSampler(hieroclf::Rng& rng, SampleOptions opts) : rng_(rng), opts_(opts) {}

  Sampled token() {
    Sampled out;
    sequence(opts_.max_depth, false, out);
    std::size_t extra = rng_.below(3);
    for (std::size_t i = 0; i < extra; ++i) {
      separator(out);
      sequence(opts_.max_depth, false, out);
    }
    return out;
  }

 private:
  hieroclf::Rng& rng_;
  SampleOptions opts_;

  static constexpr const char* kAllDelimiters[15] = {
      "-", ":", "\\", "\\\\", "\\\\\\\\", "_GROUPING_", "^", "(",
      ")", "&", "{",  "}",    ",",        "*",          "_"};
  static constexpr const char* kPlainDelimiters[4] = {"-", ":", "*", "^"};
  static constexpr const char* kSpecials[6] = {"#b-..#e", "#b", "#e",
                                               "[&",      "&]", "."};

  void separator(Sampled& out) {
    if (opts_.canonical && opts_.ws_probability > 0 &&
        rng_.chance(opts_.ws_probability)) {
      out.text += ' ';
      return;
    }
    std::size_t run = 1 + rng_.below(2);
    for (std::size_t i = 0; i < run; ++i) {
      if (opts_.canonical) {
        out.text += kPlainDelimiters[rng_.below(4)];
      } else {
        out.text += kAllDelimiters[rng_.below(15)];
      }
    }
  }

  void sequence(int depth, bool in_tilde, Sampled& out) {
    double roll = rng_.uniform();
    if (depth <= 0 || roll < 0.55) {
      classified_sign(in_tilde, out);
      return;
    }
    if (roll < 0.70) {  // ( sequence )
      out.text += '(';
      sequence(depth - 1, in_tilde, out);
      out.text += ')';
      return;
    }
    if (roll < 0.82) {  // ~ sequence ~
      out.text += '~';
      sequence(depth - 1, true, out);
      out.text += '~';
      return;
    }
    // sequence delimiters sequence
    sequence(depth - 1, in_tilde, out);
    separator(out);
    sequence(depth - 1, in_tilde, out);
  }

  void classified_sign(bool in_tilde, Sampled& out) {
    bool tilde_marked = rng_.chance(0.25);
    std::string c = code();
    if (tilde_marked) {
      out.text += '~';
      out.text += c;
      out.text += '~';
    } else {
      out.text += c;
    }
    if (opts_.canonical && !hieroclf::mdc::is_special_code(c)) {
      out.truth.push_back({c, in_tilde || tilde_marked});
    }
    if (rng_.chance(0.2)) suffix(out);
  }

  void suffix(Sampled& out) {
    switch (rng_.below(4)) {
      case 0:
        ligature(out);
        break;
      case 1:
        damage(out);
        break;
      case 2:
        ligature(out);
        damage(out);
        break;
      default:
        damage(out);
        ligature(out);
        break;
    }
  }

  void ligature(Sampled& out) {
    out.text += "{{" + std::to_string(rng_.below(10)) + "," +
                std::to_string(rng_.below(10)) + "," +
                std::to_string(rng_.below(10)) + "}}";
  }

  void damage(Sampled& out) {
    out.text += "#" + std::to_string(1 + rng_.below(99));
  }

  std::string code() {
    if (!opts_.canonical) {
      double roll = rng_.uniform();
      if (roll < 0.15) return kSpecials[rng_.below(6)];
      if (roll < 0.30) return std::to_string(rng_.below(500));
    }
    // Gardiner-style alphanumeric code.
    std::string c;
    c += static_cast<char>('A' + rng_.below(26));
    if (rng_.chance(0.15)) c += static_cast<char>('a' + rng_.below(26));
    std::size_t digits = 1 + rng_.below(2);
    for (std::size_t i = 0; i < digits; ++i) {
      c += static_cast<char>('0' + rng_.below(10));
    }
    if (rng_.chance(0.1)) c += static_cast<char>('a' + rng_.below(26));
    return c;
  }
};

}  // namespace testsupport
