#pragma once

#include <stdexcept>
#include <string>

namespace homeplan {

/// A document does not match its schema. `path()` names the offending
/// location, e.g. `keypaths[1][0].action`.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, std::string message)
        : std::runtime_error(path.empty() ? message : path + ": " + message),
          path_(std::move(path)),
          message_(std::move(message)) {}

    const std::string& path() const noexcept { return path_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string path_;
    std::string message_;
};

/// A structurally valid value breaks a domain invariant.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A log refers to a task id with no task file.
class MissingTask : public std::runtime_error {
public:
    explicit MissingTask(const std::string& id) : std::runtime_error("no task file for task id " + id), id_(id) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

}  // namespace homeplan
