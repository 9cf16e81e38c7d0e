#include "clmn/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "clmn/errors.hpp"

namespace clmn {

namespace {

struct CodePoint {
    char32_t value;
    std::size_t length;  // bytes consumed
};

// Tolerant UTF-8 decode; invalid bytes pass through as single code units.
CodePoint decode_utf8(std::string_view text, std::size_t pos) {
    const auto byte = [&](std::size_t i) -> unsigned char {
        return static_cast<unsigned char>(text[i]);
    };
    const unsigned char b0 = byte(pos);
    if (b0 < 0x80) return {b0, 1};
    auto cont = [&](std::size_t i) {
        return i < text.size() && (byte(i) & 0xc0) == 0x80;
    };
    if ((b0 & 0xe0) == 0xc0 && cont(pos + 1))
        return {static_cast<char32_t>(((b0 & 0x1fu) << 6) | (byte(pos + 1) & 0x3fu)), 2};
    if ((b0 & 0xf0) == 0xe0 && cont(pos + 1) && cont(pos + 2))
        return {static_cast<char32_t>(((b0 & 0x0fu) << 12) | ((byte(pos + 1) & 0x3fu) << 6) |
                                      (byte(pos + 2) & 0x3fu)),
                3};
    if ((b0 & 0xf8) == 0xf0 && cont(pos + 1) && cont(pos + 2) && cont(pos + 3))
        return {static_cast<char32_t>(((b0 & 0x07u) << 18) | ((byte(pos + 1) & 0x3fu) << 12) |
                                      ((byte(pos + 2) & 0x3fu) << 6) | (byte(pos + 3) & 0x3fu)),
                4};
    return {b0, 1};
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

bool is_space_cp(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
        case 0x00a0: case 0x1680: case 0x2028: case 0x2029: case 0x202f:
        case 0x205f: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200b;
    }
}

bool is_edge_punct_cp(char32_t cp) {
    if (cp < 0x80) {
        const char c = static_cast<char>(cp);
        return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
               (c >= '{' && c <= '~');
    }
    switch (cp) {
        case 0x00ab: case 0x00bb: case 0x00a1: case 0x00bf:          // guillemets, inverted
        case 0x2018: case 0x2019: case 0x201c: case 0x201d:          // curly quotes
        case 0x2013: case 0x2014: case 0x2026:                       // dashes, ellipsis
        case 0x060c: case 0x061b: case 0x061f: case 0x066d:          // Arabic punctuation
            return true;
        default:
            return false;
    }
}

char32_t lower_cp(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 32;
    if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) return cp + 32;  // Latin-1 letters
    return cp;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::vector<char32_t> current;
    auto flush = [&]() {
        if (current.empty()) return;
        std::size_t lo = 0, hi = current.size();
        while (lo < hi && is_edge_punct_cp(current[lo])) ++lo;
        while (hi > lo && is_edge_punct_cp(current[hi - 1])) --hi;
        if (hi > lo) {
            std::string token;
            for (std::size_t i = lo; i < hi; ++i) encode_utf8(current[i], token);
            tokens.push_back(std::move(token));
        }
        current.clear();
    };
    for (std::size_t pos = 0; pos < text.size();) {
        const CodePoint cp = decode_utf8(text, pos);
        pos += cp.length;
        if (is_space_cp(cp.value))
            flush();
        else
            current.push_back(lower_cp(cp.value));
    }
    flush();
    return tokens;
}

Vocabulary::Vocabulary() {
    tokens_ = {kPadToken, kUnkToken};
    index_[kPadToken] = kPadIndex;
    index_[kUnkToken] = kUnkIndex;
}

std::size_t Vocabulary::add(const std::string& token) {
    auto [it, inserted] = index_.emplace(token, tokens_.size());
    if (inserted) tokens_.push_back(token);
    return it->second;
}

std::size_t Vocabulary::lookup(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnkIndex : it->second;
}

bool Vocabulary::contains(const std::string& token) const { return index_.count(token) != 0; }

const std::string& Vocabulary::token(std::size_t index) const {
    if (index >= tokens_.size())
        throw std::out_of_range("Vocabulary: index " + std::to_string(index) + " out of range");
    return tokens_[index];
}

void Vocabulary::save(std::ostream& out) const {
    out << "clmn-vocab 1 " << tokens_.size() << "\n";
    for (const auto& token : tokens_) out << token << "\n";
}

Vocabulary Vocabulary::load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError("vocabulary: empty input");
    std::istringstream hs(header);
    std::string magic;
    int version = 0;
    std::size_t count = 0;
    hs >> magic >> version >> count;
    if (magic != "clmn-vocab" || version != 1)
        throw ParseError("vocabulary: bad header '" + header + "'");
    Vocabulary vocab;
    std::string line;
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line))
            throw ParseError("vocabulary: expected " + std::to_string(count) + " tokens, got " +
                             std::to_string(i));
        if (i == kPadIndex || i == kUnkIndex) {
            const char* expected = i == kPadIndex ? kPadToken : kUnkToken;
            if (line != expected)
                throw ParseError("vocabulary: reserved slot " + std::to_string(i) +
                                 " holds '" + line + "'");
            continue;
        }
        vocab.add(line);
    }
    return vocab;
}

Vocabulary build_vocabulary(const std::vector<std::string>& texts) {
    Vocabulary vocab;
    for (const auto& text : texts)
        for (const auto& token : tokenize(text)) vocab.add(token);
    return vocab;
}

EmbeddingTable::EmbeddingTable(std::size_t vocab_size, std::size_t dim)
    : dim_(dim), rows_(vocab_size, std::vector<double>(dim, 0.0)), cache_(vocab_size) {}

TensorPtr EmbeddingTable::row_tensor(std::size_t index) const {
    if (index >= rows_.size())
        throw std::out_of_range("EmbeddingTable: row " + std::to_string(index) +
                                " out of range");
    if (!cache_[index]) cache_[index] = Tensor::vec(std::vector<double>(rows_[index]));
    return cache_[index];
}

TensorPtr EmbeddingTable::as_tensor() const {
    std::vector<double> flat;
    flat.reserve(rows_.size() * dim_);
    for (const auto& row : rows_) flat.insert(flat.end(), row.begin(), row.end());
    return Tensor::create({rows_.size(), dim_}, std::move(flat));
}

void EmbeddingTable::assign_from_tensor(const Tensor& flat) {
    if (flat.shape != std::vector<std::size_t>{rows_.size(), dim_})
        throw ShapeError("EmbeddingTable: tensor shape mismatch");
    for (std::size_t r = 0; r < rows_.size(); ++r)
        std::copy_n(flat.data.begin() + static_cast<std::ptrdiff_t>(r * dim_), dim_,
                    rows_[r].begin());
    std::fill(cache_.begin(), cache_.end(), nullptr);
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
        if (pos > start) fields.push_back(line.substr(start, pos - start));
    }
    return fields;
}

bool parse_double(std::string_view text, double& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_size(std::string_view text, std::size_t& out) {
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

EmbeddingTable load_embeddings(const std::string& path, const Vocabulary& vocab,
                               std::size_t expected_dim) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open embedding file " + path);
    return load_embeddings(in, path, vocab, expected_dim);
}

EmbeddingTable load_embeddings(std::istream& in, const std::string& origin,
                               const Vocabulary& vocab, std::size_t expected_dim) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = expected_dim;
    bool first_data_line = true;

    std::vector<std::vector<double>> loaded(vocab.size());
    std::vector<bool> filled(vocab.size(), false);

    auto parse_data_line = [&](std::string_view text) {
        auto fields = split_ws(text);
        if (fields.empty()) return;  // blank line
        if (dim == 0) dim = fields.size() - 1;
        if (fields.size() != dim + 1)
            throw ParseError(origin + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(dim) + " values after the token, got " +
                             std::to_string(fields.size() - 1));
        std::vector<double> values(dim);
        for (std::size_t i = 0; i < dim; ++i)
            if (!parse_double(fields[i + 1], values[i]))
                throw ParseError(origin + ":" + std::to_string(line_no) +
                                 ": malformed float '" + std::string(fields[i + 1]) + "'");
        const std::string token(fields[0]);
        if (!vocab.contains(token)) return;
        const std::size_t index = vocab.lookup(token);
        if (index == Vocabulary::kPadIndex || index == Vocabulary::kUnkIndex) return;
        if (!filled[index]) {  // first occurrence wins
            loaded[index] = std::move(values);
            filled[index] = true;
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first_data_line) {
            first_data_line = false;
            auto fields = split_ws(line);
            std::size_t count = 0, file_dim = 0;
            if (fields.size() == 2 && parse_size(fields[0], count) &&
                parse_size(fields[1], file_dim)) {
                if (expected_dim != 0 && file_dim != expected_dim)
                    throw ConfigError(origin + ": embedding dimension " +
                                      std::to_string(file_dim) + " does not match configured " +
                                      std::to_string(expected_dim));
                dim = file_dim;
                continue;
            }
        }
        parse_data_line(line);
    }
    if (dim == 0) throw ParseError(origin + ": no embedding rows found");

    EmbeddingTable table(vocab.size(), dim);
    // Unknown row: element-wise mean of every loaded row; pad row stays zero.
    std::vector<double> unk(dim, 0.0);
    std::size_t loaded_count = 0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        if (!filled[i]) continue;
        ++loaded_count;
        for (std::size_t d = 0; d < dim; ++d) unk[d] += loaded[i][d];
    }
    if (loaded_count > 0)
        for (double& v : unk) v /= static_cast<double>(loaded_count);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        if (i == Vocabulary::kPadIndex) continue;
        if (filled[i])
            table.row(i) = std::move(loaded[i]);
        else
            table.row(i) = unk;
    }
    return table;
}

std::vector<Paragraph> split_paragraphs(std::string_view document,
                                        std::size_t max_paragraphs) {
    if (max_paragraphs < 1) throw ConfigError("split_paragraphs: max_paragraphs must be >= 1");
    std::vector<Paragraph> out;

    std::string current;
    bool current_has_text = false;
    auto flush = [&]() {
        if (current_has_text && out.size() < max_paragraphs)
            out.push_back({current, false});
        current.clear();
        current_has_text = false;
    };

    std::size_t pos = 0;
    while (pos <= document.size()) {
        std::size_t eol = document.find('\n', pos);
        std::string_view raw_line = eol == std::string_view::npos
                                        ? document.substr(pos)
                                        : document.substr(pos, eol - pos);
        if (!raw_line.empty() && raw_line.back() == '\r') raw_line.remove_suffix(1);

        bool blank = true;
        for (std::size_t i = 0; i < raw_line.size() && blank;) {
            const CodePoint cp = decode_utf8(raw_line, i);
            if (!is_space_cp(cp.value)) blank = false;
            i += cp.length;
        }
        if (blank) {
            flush();
        } else {
            if (current_has_text) current.push_back('\n');
            current.append(raw_line);
            current_has_text = true;
        }
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    flush();

    while (out.size() < max_paragraphs) out.push_back({"", true});
    return out;
}

TfidfModel TfidfModel::fit(const std::vector<std::vector<std::string>>& corpus,
                           const Vocabulary& vocab) {
    if (corpus.empty()) throw ConfigError("tfidf: cannot fit on an empty corpus");
    TfidfModel model;
    model.corpus_size_ = corpus.size();
    model.df_.assign(vocab.size(), 0);
    std::vector<std::size_t> seen;
    for (const auto& doc : corpus) {
        seen.clear();
        for (const auto& token : doc) {
            if (!vocab.contains(token)) continue;
            const std::size_t index = vocab.lookup(token);
            if (index == Vocabulary::kPadIndex || index == Vocabulary::kUnkIndex) continue;
            if (std::find(seen.begin(), seen.end(), index) == seen.end())
                seen.push_back(index);
        }
        for (std::size_t index : seen) ++model.df_[index];
    }
    return model;
}

TfidfModel TfidfModel::from_state(std::vector<std::int64_t> df, std::size_t corpus_size) {
    if (corpus_size == 0) throw ConfigError("tfidf: corpus size must be positive");
    TfidfModel model;
    model.df_ = std::move(df);
    model.corpus_size_ = corpus_size;
    return model;
}

double TfidfModel::idf(std::size_t token_index) const {
    const double df =
        token_index < df_.size() ? static_cast<double>(df_[token_index]) : 0.0;
    return std::log(static_cast<double>(corpus_size_) / (1.0 + df)) + 1.0;
}

std::unordered_map<std::size_t, double> TfidfModel::weights(
    const Vocabulary& vocab, const std::vector<std::string>& tokens) const {
    std::unordered_map<std::size_t, std::size_t> counts;
    for (const auto& token : tokens) {
        if (!vocab.contains(token)) continue;
        const std::size_t index = vocab.lookup(token);
        if (index == Vocabulary::kPadIndex || index == Vocabulary::kUnkIndex) continue;
        ++counts[index];
    }
    std::unordered_map<std::size_t, double> out;
    for (const auto& [index, count] : counts)
        out[index] = static_cast<double>(count) * idf(index);
    return out;
}

double TfidfModel::cosine(const Vocabulary& vocab, const std::vector<std::string>& a,
                          const std::vector<std::string>& b) const {
    const auto wa = weights(vocab, a);
    const auto wb = weights(vocab, b);
    if (wa.empty() || wb.empty()) return 0.0;
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (const auto& [index, w] : wa) {
        aa += w * w;
        auto it = wb.find(index);
        if (it != wb.end()) ab += w * it->second;
    }
    for (const auto& [index, w] : wb) bb += w * w;
    if (aa == 0.0 || bb == 0.0) return 0.0;
    return std::clamp(ab / (std::sqrt(aa) * std::sqrt(bb)), 0.0, 1.0);
}

}  // namespace clmn
