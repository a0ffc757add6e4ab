#pragma once

#include <gtest/gtest.h>

#include "maskprompt/error.hpp"

namespace oracle {

// Runs `f` and returns the kind of the maskprompt::Error it throws; records
// a test failure when nothing is thrown.
template <typename F>
maskprompt::ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const maskprompt::Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no maskprompt::Error thrown";
    return maskprompt::ErrorKind::Io;
}

// Message of the maskprompt::Error thrown by `f`, or "" when none is.
template <typename F>
std::string message_of(F&& f) {
    try {
        f();
    } catch (const maskprompt::Error& e) {
        return e.what();
    }
    ADD_FAILURE() << "no maskprompt::Error thrown";
    return {};
}

}  // namespace oracle
