#include "leocov/error.hpp"

#include <iostream>
#include <mutex>

namespace leocov {

namespace {

std::mutex& handler_mutex()
{
    static std::mutex m;
    return m;
}

WarningHandler& handler_slot()
{
    static WarningHandler h;
    return h;
}

}  // namespace

void set_warning_handler(WarningHandler handler)
{
    std::lock_guard lock(handler_mutex());
    handler_slot() = std::move(handler);
}

void warn(std::string_view message)
{
    std::lock_guard lock(handler_mutex());
    if (auto& h = handler_slot()) {
        h(message);
        return;
    }
    std::cerr << "warning: " << message << '\n';
}

}  // namespace leocov
