//! Doc-test anchors for the guide chapters under `book/src`. Each chapter
//! is included verbatim so its fenced Rust snippets run with the library's
//! doc tests and cannot drift from the code.
