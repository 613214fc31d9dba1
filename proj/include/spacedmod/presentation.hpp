#pragma once

#include "spacedmod/matrix.hpp"

#include <map>
#include <string>
#include <vector>

namespace spacedmod {

struct ObjectId {
    std::string name;
    int index = -1;  // dense, contiguous from 0
    bool operator==(const ObjectId& o) const { return index == o.index; }
};

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(std::string msg, int line_, int col_)
        : std::runtime_error(std::move(msg)), line(line_), column(col_) {}
};

/// Matrix presentation of a module over an aggregate: one vector space
/// dimension per object and, per ordered object pair, a spanning list of
/// the radical image in Hom(M(from), M(to)).
struct SpacedModulePresentation {
    FieldDesc field;
    std::vector<ObjectId> objects;
    std::vector<int> dims;                       // dims[i] = dim M(objects[i])
    std::map<std::pair<int, int>, std::vector<Matrix>> rad;  // (from, to) -> spanning matrices

    int num_objects() const { return static_cast<int>(objects.size()); }
    int dim(int obj) const { return dims[static_cast<std::size_t>(obj)]; }
    const std::vector<Matrix>& rad_list(int from, int to) const;
    SpanBasis rad_span(int from, int to) const;
    int object_index(const std::string& name) const;  // -1 when absent
};

struct ValidationIssue {
    enum class Kind { Independence, Closure, Nilpotency } kind;
    std::string detail;
    std::vector<std::string> involved;  // object names
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool valid() const { return issues.empty(); }
};

/// Checks spanning-list independence, composition closure and endomorphism
/// nilpotency. Every violation becomes a report entry; nothing throws.
ValidationReport validate(const SpacedModulePresentation& p);

/// Replaces every spanning list by the reduced row-echelon basis of its
/// span (vectorized row-major). Spans are unchanged.
SpacedModulePresentation canonicalize(const SpacedModulePresentation& p);

/// Parses the JSON presentation document. Throws ParseError with line and
/// column on malformed JSON, std::invalid_argument on schema or dimension
/// errors (the message names the offending matrix).
SpacedModulePresentation parse_presentation(const std::string& text);

/// Canonical JSON document; parse_presentation round-trips it bit-exactly.
std::string serialize_presentation(const SpacedModulePresentation& p);

}  // namespace spacedmod
